#pragma once

#include <cstddef>
#include <span>

#include "sparse_pr/rng.hpp"
#include "sparse_pr/signal.hpp"

namespace sparse_pr {

// Sparse Fienup baseline: alternate projections onto
//   C_s = {x : ||x||_0 <= s}   and   M = {x : |F x| = b}
// with F the unitary DFT. Only the sparsity budget is given, not the support.

struct SprConfig {
  std::size_t s = 1;
  std::size_t max_iters = 10000;
  double tol = 1e-8;  // on ||x^{k+1} - x^k|| / ||x^k||
  RngSpec rng;

  void validate() const;
};

struct SprResult {
  ComplexSignal estimate;
  std::size_t iterations = 0;
  double wall_time_s = 0.0;
};

// Keeps the s largest-modulus entries (ties to the lower index), zeroes the rest.
CVector project_sparsity(std::span<const Complex> x, std::size_t s);

// F* (b o phase(F x)), with phase(0) := 1.
CVector project_magnitude(std::span<const Complex> x, std::span<const double> b);

// Random complex-Gaussian start, iterate x <- P_Cs(P_M(x)) until the relative
// change drops to tol or max_iters is reached; returns the last iterate.
SprResult spr_solve(const Magnitudes& b, const SprConfig& cfg);

}  // namespace sparse_pr
