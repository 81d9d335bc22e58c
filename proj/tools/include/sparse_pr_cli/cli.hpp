#pragma once

#include <iosfwd>

namespace sparse_pr::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kRuntimeError = 1;
inline constexpr int kUsageError = 2;

// Entry point of the `sparse_pr` tool. Subcommands: solve, bench, masks, oracle.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sparse_pr::cli
