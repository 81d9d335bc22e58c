#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "sparse_pr/operators.hpp"
#include "sparse_pr/rng.hpp"
#include "sparse_pr/types.hpp"

namespace sparse_pr::testing {

// Row-major dense complex matrix.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  CVector data;

  Complex& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  Complex operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Unitary DFT matrix from the textbook formula, no FFT involved.
inline DenseMatrix dense_dft(std::size_t n) {
  DenseMatrix f{n, n, CVector(n * n)};
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      const double angle =
          -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      f(k, j) = s * std::polar(1.0, angle);
    }
  }
  return f;
}

// Dense A for a DFT (no masks) or a stacked CDP operator [F diag(M_1); ...].
inline DenseMatrix dense_operator(std::size_t n, const std::vector<CVector>& masks) {
  const DenseMatrix f = dense_dft(n);
  if (masks.empty()) return f;
  DenseMatrix a{masks.size() * n, n, CVector(masks.size() * n * n)};
  for (std::size_t j = 0; j < masks.size(); ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) a(j * n + k, i) = f(k, i) * masks[j][i];
    }
  }
  return a;
}

inline DenseMatrix dense_operator(const MeasurementOperator& op) {
  return dense_operator(op.signal_size(), op.masks());
}

inline CVector matvec(const DenseMatrix& a, const CVector& x) {
  CVector y(a.rows);
  for (std::size_t r = 0; r < a.rows; ++r) {
    Complex acc{};
    for (std::size_t c = 0; c < a.cols; ++c) acc += a(r, c) * x[c];
    y[r] = acc;
  }
  return y;
}

inline CVector adjoint_matvec(const DenseMatrix& a, const CVector& y) {
  CVector x(a.cols);
  for (std::size_t r = 0; r < a.rows; ++r) {
    for (std::size_t c = 0; c < a.cols; ++c) x[c] += std::conj(a(r, c)) * y[r];
  }
  return x;
}

// A* A, dense.
inline DenseMatrix gram(const DenseMatrix& a) {
  DenseMatrix g{a.cols, a.cols, CVector(a.cols * a.cols)};
  for (std::size_t i = 0; i < a.cols; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) {
      Complex acc{};
      for (std::size_t r = 0; r < a.rows; ++r) acc += std::conj(a(r, i)) * a(r, j);
      g(i, j) = acc;
    }
  }
  return g;
}

inline Complex inner(const CVector& a, const CVector& b) {
  Complex acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

inline double norm(const CVector& a) { return std::sqrt(std::real(inner(a, a))); }

inline double distance(const CVector& a, const CVector& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
  return std::sqrt(acc);
}

inline CVector random_vector(std::size_t n, Rng& rng) { return complex_normal_vector(n, rng); }

}  // namespace sparse_pr::testing
