#include "sparse_pr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace sparse_pr::oracle {

double objective_l2(double k, const MagnitudeFitInput& in) {
  const double a = in.b - k * in.w_abs;
  const double c = (1.0 - k) * in.w_abs;
  return 0.5 * a * a + 0.5 * in.r2 * c * c;
}

double objective_l1(double k, const MagnitudeFitInput& in) {
  const double c = (1.0 - k) * in.w_abs;
  return std::abs(in.b - k * in.w_abs) + 0.5 * in.r2 * c * c;
}

double objective_soft(double y, double y0, double r) {
  return std::abs(y) + 0.5 * r * (y - y0) * (y - y0);
}

double objective_hard(Complex q, Complex v, double lambda, double r1) {
  const double penalty = (q.real() != 0.0 || q.imag() != 0.0) ? lambda : 0.0;
  return penalty + 0.5 * r1 * std::norm(q - v);
}

double objective_degenerate(double m, double b, double r2, int p) {
  const double d = std::abs(b - m);
  return (p == 2 ? 0.5 * d * d : d) + 0.5 * r2 * m * m;
}

namespace {

Minimum grid_search(const std::function<double(double)>& f, double lo, double hi,
                    const GridOptions& opt) {
  const std::size_t m = std::max<std::size_t>(opt.points, 2);
  const double step = (hi - lo) / static_cast<double>(m - 1);
  Minimum best{lo, f(lo)};
  std::size_t best_i = 0;
  for (std::size_t i = 1; i < m; ++i) {
    const double t = i + 1 == m ? hi : lo + step * static_cast<double>(i);
    const double v = f(t);
    if (v < best.value) {
      best = {t, v};
      best_i = i;
    }
  }
  if (!opt.refine) return best;

  // Golden-section search on the two cells around the best grid point.
  double a = lo + step * static_cast<double>(best_i == 0 ? 0 : best_i - 1);
  double b = std::min(hi, lo + step * static_cast<double>(best_i + 1));
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * (1.0 + std::abs(a)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  for (double t : {a, b, c, d}) {
    const double v = f(t);
    if (v < best.value) best = {t, v};
  }
  return best;
}

// Both objectives grow for k beyond max(1, b / w), so this bracket is safe.
double k_upper(const MagnitudeFitInput& in) {
  return 2.0 + 2.0 * std::max(1.0, std::abs(in.b) / in.w_abs);
}

}  // namespace

Minimum minimize_l2(const MagnitudeFitInput& in, const GridOptions& opt) {
  if (in.w_abs == 0.0) return minimize_degenerate(in.b, in.r2, 2, opt);
  return grid_search([&](double k) { return objective_l2(k, in); }, 0.0, k_upper(in), opt);
}

Minimum minimize_l1(const MagnitudeFitInput& in, const GridOptions& opt) {
  return grid_search([&](double k) { return objective_l1(k, in); }, 0.0, k_upper(in), opt);
}

Minimum minimize_soft(double y0, double y1, double r, const GridOptions& opt) {
  const double hi = std::max({y1, y0, 0.0}) + 2.0;
  return grid_search([&](double y) { return objective_soft(y, y0, r); }, y1, hi, opt);
}

Minimum minimize_degenerate(double b, double r2, int p, const GridOptions& opt) {
  return grid_search([&](double m) { return objective_degenerate(m, b, r2, p); }, 0.0,
                     std::abs(b) + 2.0, opt);
}

ComplexMinimum minimize_hard(Complex v, double lambda, double r1, std::size_t grid_side) {
  ComplexMinimum best{Complex{0.0, 0.0}, objective_hard(Complex{0.0, 0.0}, v, lambda, r1)};
  const std::size_t side = std::max<std::size_t>(grid_side, 3) | 1;  // odd: v is a grid point
  const double radius = std::abs(v) + 1.0;
  const double step = 2.0 * radius / static_cast<double>(side - 1);
  const auto half = static_cast<std::ptrdiff_t>(side / 2);
  for (std::ptrdiff_t i = -half; i <= half; ++i) {
    for (std::ptrdiff_t j = -half; j <= half; ++j) {
      const Complex q = v + Complex{step * static_cast<double>(i), step * static_cast<double>(j)};
      const double val = objective_hard(q, v, lambda, r1);
      if (val < best.value) best = {q, val};
    }
  }
  return best;
}

}  // namespace sparse_pr::oracle
