#pragma once

#include <cstddef>
#include <span>

#include "sparse_pr/types.hpp"

namespace sparse_pr {

// Unitary 1-D DFT of a fixed length, backed by FFTW.
//
// forward: X_k = n^{-1/2} sum_j x_j exp(-2 pi i jk/n)
// inverse: x_j = n^{-1/2} sum_k X_k exp(+2 pi i jk/n)
//
// Plans are created once per (length, direction, placement) and cached for the
// process lifetime. Execution uses FFTW's new-array interface, which is
// reentrant, so a single UnitaryFft may be used from many threads at once.
// In-place calls (in.data() == out.data()) are supported.
class UnitaryFft {
 public:
  explicit UnitaryFft(std::size_t n);

  std::size_t size() const { return n_; }

  void forward(std::span<const Complex> in, std::span<Complex> out) const;
  void inverse(std::span<const Complex> in, std::span<Complex> out) const;

  // Unnormalized transforms; callers that fold the 1/sqrt(n) into another
  // pass use these to save a sweep.
  void forward_raw(std::span<const Complex> in, std::span<Complex> out) const;
  void inverse_raw(std::span<const Complex> in, std::span<Complex> out) const;

  double scale() const { return scale_; }

 private:
  void execute(int sign, std::span<const Complex> in, std::span<Complex> out) const;

  std::size_t n_;
  double scale_;
  void* forward_oop_;
  void* forward_inplace_;
  void* inverse_oop_;
  void* inverse_inplace_;
};

}  // namespace sparse_pr
