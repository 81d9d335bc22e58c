#include "sparse_pr/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sparse_pr {

namespace {

bool finite(const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

}  // namespace

ComplexSignal::ComplexSignal(CVector values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("ComplexSignal: length must be >= 1");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!finite(values_[i])) {
      throw std::invalid_argument("ComplexSignal: non-finite entry at index " +
                                  std::to_string(i));
    }
  }
}

Magnitudes::Magnitudes(RVector values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("Magnitudes: length must be >= 1");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw std::invalid_argument("Magnitudes: non-finite entry at index " + std::to_string(i));
    }
  }
}

bool Magnitudes::is_nonnegative() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0; });
}

double Magnitudes::norm() const {
  double acc = 0.0;
  for (double v : values_) acc += v * v;
  return std::sqrt(acc);
}

std::size_t l0_norm(std::span<const Complex> x) {
  return static_cast<std::size_t>(std::count_if(x.begin(), x.end(), [](const Complex& c) {
    return std::abs(c.real()) + std::abs(c.imag()) != 0.0;
  }));
}

SparseGroundTruth generate_sparse_signal(std::size_t n, std::size_t s, RngSpec spec,
                                         bool complex_valued) {
  if (s < 1 || s > n) {
    throw std::invalid_argument("generate_sparse_signal: need 1 <= s <= n (s=" +
                                std::to_string(s) + ", n=" + std::to_string(n) + ")");
  }
  Rng rng(spec);

  // Partial Fisher-Yates: the first s slots form a uniform s-subset.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < s; ++i) {
    const std::size_t j = i + rng.index(n - i);
    std::swap(perm[i], perm[j]);
  }
  std::vector<std::size_t> support(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(s));
  std::sort(support.begin(), support.end());

  // CN(0, 1): E|v|^2 = 1, i.e. real and imaginary parts each N(0, 1/2).
  const double part_sd = std::sqrt(0.5);
  CVector values(n, Complex{0.0, 0.0});
  for (std::size_t idx : support) {
    Complex v;
    do {
      v = complex_valued ? part_sd * rng.complex_normal() : Complex{rng.normal(), 0.0};
    } while (v == Complex{0.0, 0.0});
    values[idx] = v;
  }
  return {ComplexSignal(std::move(values)), std::move(support)};
}

bool all_finite(std::span<const Complex> x) {
  return std::all_of(x.begin(), x.end(), finite);
}

RVector abs(std::span<const Complex> x) {
  RVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::abs(x[i]);
  return out;
}

double norm2(std::span<const Complex> x) {
  double acc = 0.0;
  for (const auto& c : x) acc += std::norm(c);
  return std::sqrt(acc);
}

}  // namespace sparse_pr
