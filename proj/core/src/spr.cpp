#include "sparse_pr/spr.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparse_pr/fft.hpp"

namespace sparse_pr {

void SprConfig::validate() const {
  if (s < 1) throw std::invalid_argument("spr config: s must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("spr config: tol must be > 0");
  if (max_iters < 1) throw std::invalid_argument("spr config: max_iters must be >= 1");
}

namespace {

// Selection by modulus into a reusable index buffer.
void sparsify_in_place(std::span<Complex> x, std::size_t s, std::vector<std::size_t>& order) {
  const std::size_t n = x.size();
  if (s >= n) return;
  order.resize(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto larger = [&](std::size_t a, std::size_t b) {
    const double ma = std::norm(x[a]);
    const double mb = std::norm(x[b]);
    return ma > mb || (ma == mb && a < b);
  };
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(s), order.end(),
                   larger);
  for (std::size_t k = s; k < n; ++k) x[order[k]] = Complex{0.0, 0.0};
}

void apply_magnitude(std::span<Complex> spectrum, std::span<const double> b) {
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const double m = std::abs(spectrum[i]);
    spectrum[i] = m == 0.0 ? Complex{b[i], 0.0} : spectrum[i] * (b[i] / m);
  }
}

}  // namespace

CVector project_sparsity(std::span<const Complex> x, std::size_t s) {
  if (s < 1 || s > x.size()) {
    throw std::invalid_argument("project_sparsity: need 1 <= s <= n");
  }
  CVector out(x.begin(), x.end());
  std::vector<std::size_t> order;
  sparsify_in_place(out, s, order);
  return out;
}

CVector project_magnitude(std::span<const Complex> x, std::span<const double> b) {
  if (b.size() != x.size()) throw std::invalid_argument("project_magnitude: length mismatch");
  const UnitaryFft fft(x.size());
  CVector y(x.size());
  fft.forward(x, y);
  apply_magnitude(y, b);
  fft.inverse(y, y);
  return y;
}

SprResult spr_solve(const Magnitudes& b, const SprConfig& cfg) {
  cfg.validate();
  const std::size_t n = b.size();
  if (cfg.s > n) throw std::invalid_argument("spr config: s exceeds signal length");
  const auto start = std::chrono::steady_clock::now();
  const UnitaryFft fft(n);
  const auto bv = b.values();

  Rng rng(cfg.rng);
  CVector x = complex_normal_vector(n, rng);
  CVector next(n);
  std::vector<std::size_t> order;
  std::size_t it = 0;
  while (it < cfg.max_iters) {
    fft.forward(x, next);
    apply_magnitude(next, bv);
    fft.inverse(next, next);
    sparsify_in_place(next, cfg.s, order);
    ++it;

    double diff = 0.0;
    double base = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      diff += std::norm(next[i] - x[i]);
      base += std::norm(x[i]);
    }
    std::swap(x, next);
    if (base == 0.0 || std::sqrt(diff / base) <= cfg.tol) break;
  }
  SprResult result{ComplexSignal(std::move(x)), it, 0.0};
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace sparse_pr
