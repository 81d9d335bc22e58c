#pragma once

#include <span>

#include "sparse_pr/operators.hpp"
#include "sparse_pr/types.hpp"

namespace sparse_pr {

// Closed-form minimizers of the three ADMM subproblems. All kernels except
// update_x are entrywise.

// Solves (r1 I + r2 A*A) x = r1 q + r2 A* z + A* lam2 - lam1. Since A*A is
// the diagonal gram_diagonal(), this is a single adjoint plus a division.
// Throws std::invalid_argument on dimension mismatch.
void update_x(const MeasurementOperator& op, std::span<const Complex> q,
              std::span<const Complex> z, std::span<const Complex> lam1,
              std::span<const Complex> lam2, double r1, double r2, std::span<Complex> x);
CVector update_x(const MeasurementOperator& op, std::span<const Complex> q,
                 std::span<const Complex> z, std::span<const Complex> lam1,
                 std::span<const Complex> lam2, double r1, double r2);

// Entrywise argmin of lambda 1{q != 0} + (r1/2)|q - v|^2 with v = x + lam1/r1:
// q = 0 when |v|^2 <= 2 lambda / r1 (ties go to zero), q = v otherwise.
void hard_threshold_q(std::span<const Complex> x, std::span<const Complex> lam1, double r1,
                      double lambda, std::span<Complex> q);
CVector hard_threshold_q(std::span<const Complex> x, std::span<const Complex> lam1, double r1,
                         double lambda);

struct MagnitudeFitInput {
  double w_abs;  // |W_i| >= 0
  double b;      // observed magnitude
  double r2;     // > 0
};

// argmin_{k >= 0} (1/2)(b - k|W|)^2 + (r2/2)(1 - k)^2 |W|^2.
// For |W| = 0 the returned value is the output magnitude max(b, 0)/(1 + r2)
// itself rather than a scale factor.
double magnitude_fit_l2(const MagnitudeFitInput& in);

// argmin_{y >= y1} |y| + (r/2)(y - y0)^2.
double constrained_soft_threshold(double y0, double y1, double r);

// argmin_{k >= 0} |b - k|W|| + (r2/2)(1 - k)^2 |W|^2, for |W| > 0.
double magnitude_fit_l1(const MagnitudeFitInput& in);

// Output magnitude m >= 0 when W_i = 0: argmin (1/p)|b - m|^p + (r2/2) m^2.
double degenerate_magnitude(double b, double r2, int p);

// z_i = k_i W_i, with k from the p-specific magnitude fit; entries with
// W_i = 0 take direction 1 + 0i and the degenerate magnitude.
// Throws std::invalid_argument for p not in {1, 2} or length mismatch.
void update_z(std::span<const Complex> w, std::span<const double> b, double r2, int p,
              std::span<Complex> z);
CVector update_z(std::span<const Complex> w, std::span<const double> b, double r2, int p);

}  // namespace sparse_pr
