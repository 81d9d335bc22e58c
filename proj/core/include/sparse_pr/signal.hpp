#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sparse_pr/rng.hpp"
#include "sparse_pr/types.hpp"

namespace sparse_pr {

// Finite complex vector of fixed length >= 1. Immutable once built.
class ComplexSignal {
 public:
  // Throws std::invalid_argument on empty input or any non-finite entry.
  explicit ComplexSignal(CVector values);

  std::size_t size() const { return values_.size(); }
  std::span<const Complex> values() const { return values_; }
  const CVector& vector() const { return values_; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  friend bool operator==(const ComplexSignal&, const ComplexSignal&) = default;

 private:
  CVector values_;
};

// Observed magnitudes b. Finite; entries may be negative once noise is added.
class Magnitudes {
 public:
  explicit Magnitudes(RVector values);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  const RVector& vector() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  bool is_nonnegative() const;
  double norm() const;

  friend bool operator==(const Magnitudes&, const Magnitudes&) = default;

 private:
  RVector values_;
};

struct SparseGroundTruth {
  ComplexSignal signal;
  std::vector<std::size_t> support;  // sorted ascending

  std::size_t sparsity() const { return support.size(); }
};

// Number of entries with |Re| + |Im| != 0. Exact test, no tolerance.
std::size_t l0_norm(std::span<const Complex> x);
inline std::size_t l0_norm(const ComplexSignal& x) { return l0_norm(x.values()); }

// Uniform random support of size s; on-support values are i.i.d. standard
// complex Gaussian CN(0, 1) (or real N(0, 1)), redrawn if exactly zero.
SparseGroundTruth generate_sparse_signal(std::size_t n, std::size_t s, RngSpec rng,
                                         bool complex_valued = true);

bool all_finite(std::span<const Complex> x);

// |x_i| componentwise.
RVector abs(std::span<const Complex> x);

double norm2(std::span<const Complex> x);

}  // namespace sparse_pr
