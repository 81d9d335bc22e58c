#include <iostream>

#include "sparse_pr_cli/cli.hpp"

int main(int argc, char** argv) {
  return sparse_pr::cli::cli_main(argc, argv, std::cout, std::cerr);
}
