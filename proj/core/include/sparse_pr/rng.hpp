#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "sparse_pr/types.hpp"

namespace sparse_pr {

// A seed plus a substream id. Two specs that compare equal produce identical
// draws; distinct stream ids give statistically independent draws.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  RngSpec with_stream(std::uint64_t s) const { return {seed, s}; }
  friend bool operator==(const RngSpec&, const RngSpec&) = default;
};

// splitmix64 finalizer; used to derive seeds and to hash sweep coordinates.
std::uint64_t mix64(std::uint64_t x);

// Order-sensitive combination of two 64-bit words.
std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v);

class Rng {
 public:
  explicit Rng(RngSpec spec);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  // Uniform integer in [0, bound).
  std::size_t index(std::size_t bound);
  // Real and imaginary parts i.i.d. N(0, 1).
  Complex complex_normal() {
    const double re = normal();
    return {re, normal()};
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

CVector complex_normal_vector(std::size_t n, Rng& rng);

}  // namespace sparse_pr
