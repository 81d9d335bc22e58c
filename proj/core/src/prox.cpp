#include "sparse_pr/prox.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sparse_pr {

namespace {

void require_size(const char* what, std::size_t got, std::size_t want) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": length " + std::to_string(got) +
                                ", expected " + std::to_string(want));
  }
}

void require_p(int p) {
  if (p != 1 && p != 2) {
    throw std::invalid_argument("fidelity exponent p must be 1 or 2, got " + std::to_string(p));
  }
}

double soft_threshold(double v, double t) {
  const double m = std::max(std::abs(v) - t, 0.0);
  return v >= 0.0 ? m : -m;
}

}  // namespace

void update_x(const MeasurementOperator& op, std::span<const Complex> q,
              std::span<const Complex> z, std::span<const Complex> lam1,
              std::span<const Complex> lam2, double r1, double r2, std::span<Complex> x) {
  const std::size_t n = op.signal_size();
  const std::size_t m = op.measurement_size();
  require_size("update_x q", q.size(), n);
  require_size("update_x lam1", lam1.size(), n);
  require_size("update_x x", x.size(), n);
  require_size("update_x z", z.size(), m);
  require_size("update_x lam2", lam2.size(), m);

  // A*(r2 z + lam2) in one adjoint.
  thread_local CVector rhs;
  rhs.resize(m);
  for (std::size_t i = 0; i < m; ++i) rhs[i] = r2 * z[i] + lam2[i];
  op.adjoint(rhs, x);

  const auto& gram = op.gram_diagonal();
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = (r1 * q[i] + x[i] - lam1[i]) / (r1 + r2 * gram[i]);
  }
}

CVector update_x(const MeasurementOperator& op, std::span<const Complex> q,
                 std::span<const Complex> z, std::span<const Complex> lam1,
                 std::span<const Complex> lam2, double r1, double r2) {
  CVector x(op.signal_size());
  update_x(op, q, z, lam1, lam2, r1, r2, x);
  return x;
}

void hard_threshold_q(std::span<const Complex> x, std::span<const Complex> lam1, double r1,
                      double lambda, std::span<Complex> q) {
  require_size("hard_threshold_q lam1", lam1.size(), x.size());
  require_size("hard_threshold_q q", q.size(), x.size());
  const double threshold = 2.0 * lambda / r1;
  const double inv_r1 = 1.0 / r1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Complex v = x[i] + lam1[i] * inv_r1;
    q[i] = std::norm(v) <= threshold ? Complex{0.0, 0.0} : v;
  }
}

CVector hard_threshold_q(std::span<const Complex> x, std::span<const Complex> lam1, double r1,
                         double lambda) {
  CVector q(x.size());
  hard_threshold_q(x, lam1, r1, lambda, q);
  return q;
}

double magnitude_fit_l2(const MagnitudeFitInput& in) {
  if (in.w_abs == 0.0) return std::max(in.b, 0.0) / (1.0 + in.r2);
  return std::max(0.0, (in.b + in.r2 * in.w_abs) / ((1.0 + in.r2) * in.w_abs));
}

double constrained_soft_threshold(double y0, double y1, double r) {
  // The objective is convex, so the constrained minimizer is the unconstrained
  // one (soft threshold) clamped to the feasible half-line.
  return std::max(y1, soft_threshold(y0, 1.0 / r));
}

double magnitude_fit_l1(const MagnitudeFitInput& in) {
  // Substituting t = k|W| - b gives |t| + (r2/2)(t - R)^2 over t >= -b.
  const double residual = in.w_abs - in.b;
  const double t = constrained_soft_threshold(residual, -in.b, in.r2);
  return (t + in.b) / in.w_abs;
}

double degenerate_magnitude(double b, double r2, int p) {
  require_p(p);
  if (p == 2) return std::max(b, 0.0) / (1.0 + r2);
  // m = y + b with y minimizing |y| + (r2/2)(y + b)^2 over y >= -b.
  return constrained_soft_threshold(-b, -b, r2) + b;
}

void update_z(std::span<const Complex> w, std::span<const double> b, double r2, int p,
              std::span<Complex> z) {
  require_p(p);
  require_size("update_z b", b.size(), w.size());
  require_size("update_z z", z.size(), w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const MagnitudeFitInput in{std::sqrt(std::norm(w[i])), b[i], r2};
    if (in.w_abs == 0.0) {
      z[i] = Complex{degenerate_magnitude(in.b, r2, p), 0.0};
      continue;
    }
    const double k = p == 2 ? magnitude_fit_l2(in) : magnitude_fit_l1(in);
    z[i] = k * w[i];
  }
}

CVector update_z(std::span<const Complex> w, std::span<const double> b, double r2, int p) {
  CVector z(w.size());
  update_z(w, b, r2, p, z);
  return z;
}

}  // namespace sparse_pr
