#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sparse_pr/fft.hpp"
#include "sparse_pr/rng.hpp"
#include "sparse_pr/types.hpp"

namespace sparse_pr {

enum class OperatorKind { kUnitaryDft, kCodedDiffraction };

std::string to_string(OperatorKind kind);

// Linear measurement map A : C^n -> C^m with m = n (DFT) or K n (CDP).
//
// CDP applies A u = (F(M_1 o u), ..., F(M_K o u)) with F the unitary DFT;
// blocks are stacked j = 1..K, each in natural bin order. Both kinds satisfy
// Im(A* A) = 0 with A* A diagonal, which is what the x-update relies on.
//
// Instances are immutable; forward/adjoint are reentrant.
class MeasurementOperator {
 public:
  static MeasurementOperator dft(std::size_t n);
  // Every mask must have the same length n >= 1 and at least one mask given.
  static MeasurementOperator cdp(std::vector<CVector> masks);

  OperatorKind kind() const { return kind_; }
  std::size_t signal_size() const { return n_; }
  std::size_t measurement_size() const { return n_ * std::max<std::size_t>(1, masks_.size()); }
  std::size_t mask_count() const { return masks_.size(); }
  const std::vector<CVector>& masks() const { return masks_; }

  // Lengths must match signal_size()/measurement_size(); otherwise
  // std::invalid_argument. `out` must not alias `x`.
  void forward(std::span<const Complex> x, std::span<Complex> out) const;
  CVector forward(std::span<const Complex> x) const;
  void adjoint(std::span<const Complex> y, std::span<Complex> out) const;
  CVector adjoint(std::span<const Complex> y) const;

  // diag(A* A): all ones for the DFT, sum_j |M_j|^2 for CDP.
  const RVector& gram_diagonal() const { return gram_; }

  const UnitaryFft& fft() const { return fft_; }

  // e.g. "kind=CDP n=64 K=4 measurements=256".
  std::string describe() const;

 private:
  MeasurementOperator(OperatorKind kind, std::size_t n, std::vector<CVector> masks);

  OperatorKind kind_;
  std::size_t n_;
  std::vector<CVector> masks_;
  RVector gram_;
  UnitaryFft fft_;
};

// The eight octanary values {+-sqrt2/2, +-i sqrt2/2, +-sqrt3, +-i sqrt3}, in
// that order: +a, -a, +ia, -ia, +c, -c, +ic, -ic.
const std::vector<Complex>& octanary_alphabet();

// K masks of length n with entries drawn uniformly from octanary_alphabet().
std::vector<CVector> make_octanary_masks(std::size_t k, std::size_t n, RngSpec rng);

}  // namespace sparse_pr
