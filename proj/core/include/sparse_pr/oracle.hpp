#pragma once

#include <cstddef>

#include "sparse_pr/prox.hpp"
#include "sparse_pr/types.hpp"

namespace sparse_pr::oracle {

// Brute-force reference minimizers for the prox kernels. They only ever
// evaluate the scalar objectives below: a dense grid over a bracket that is
// guaranteed to contain the minimizer, then golden-section refinement around
// the best grid point. Used by tests and the `oracle` CLI subcommand.

struct GridOptions {
  std::size_t points = 20001;
  bool refine = true;
};

struct Minimum {
  double argmin = 0.0;
  double value = 0.0;
};

struct ComplexMinimum {
  Complex argmin{};
  double value = 0.0;
};

// (1/2)(b - k w)^2 + (r2/2)(1 - k)^2 w^2.
double objective_l2(double k, const MagnitudeFitInput& in);
// |b - k w| + (r2/2)(1 - k)^2 w^2.
double objective_l1(double k, const MagnitudeFitInput& in);
// |y| + (r/2)(y - y0)^2.
double objective_soft(double y, double y0, double r);
// lambda 1{q != 0} + (r1/2)|q - v|^2.
double objective_hard(Complex q, Complex v, double lambda, double r1);
// (1/p)|b - m|^p + (r2/2) m^2 (output magnitude when W = 0).
double objective_degenerate(double m, double b, double r2, int p);

Minimum minimize_l2(const MagnitudeFitInput& in, const GridOptions& opt = {});
Minimum minimize_l1(const MagnitudeFitInput& in, const GridOptions& opt = {});
// Over y >= y1.
Minimum minimize_soft(double y0, double y1, double r, const GridOptions& opt = {});
Minimum minimize_degenerate(double b, double r2, int p, const GridOptions& opt = {});
// Candidates: q = 0 and a square grid of side grid_side centred on v.
ComplexMinimum minimize_hard(Complex v, double lambda, double r1, std::size_t grid_side = 201);

}  // namespace sparse_pr::oracle
