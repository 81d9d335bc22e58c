#include "sparse_pr/operators.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sparse_pr {

std::string to_string(OperatorKind kind) {
  return kind == OperatorKind::kUnitaryDft ? "DFT" : "CDP";
}

MeasurementOperator::MeasurementOperator(OperatorKind kind, std::size_t n,
                                         std::vector<CVector> masks)
    : kind_(kind), n_(n), masks_(std::move(masks)), gram_(n, 0.0), fft_(n) {
  if (kind_ == OperatorKind::kUnitaryDft) {
    std::fill(gram_.begin(), gram_.end(), 1.0);
    return;
  }
  for (const auto& m : masks_) {
    for (std::size_t i = 0; i < n_; ++i) gram_[i] += std::norm(m[i]);
  }
}

MeasurementOperator MeasurementOperator::dft(std::size_t n) {
  if (n == 0) throw std::invalid_argument("dft operator: n must be >= 1");
  return MeasurementOperator(OperatorKind::kUnitaryDft, n, {});
}

MeasurementOperator MeasurementOperator::cdp(std::vector<CVector> masks) {
  if (masks.empty()) throw std::invalid_argument("cdp operator: need at least one mask");
  const std::size_t n = masks.front().size();
  if (n == 0) throw std::invalid_argument("cdp operator: masks must be non-empty");
  for (const auto& m : masks) {
    if (m.size() != n) throw std::invalid_argument("cdp operator: masks differ in length");
    for (const auto& c : m) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw std::invalid_argument("cdp operator: non-finite mask entry");
      }
    }
  }
  return MeasurementOperator(OperatorKind::kCodedDiffraction, n, std::move(masks));
}

namespace {

void check_length(const char* what, std::size_t got, std::size_t want) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": length " + std::to_string(got) +
                                ", expected " + std::to_string(want));
  }
}

}  // namespace

void MeasurementOperator::forward(std::span<const Complex> x, std::span<Complex> out) const {
  check_length("forward input", x.size(), n_);
  check_length("forward output", out.size(), measurement_size());
  if (kind_ == OperatorKind::kUnitaryDft) {
    fft_.forward(x, out);
    return;
  }
  const double s = fft_.scale();
  for (std::size_t j = 0; j < masks_.size(); ++j) {
    auto block = out.subspan(j * n_, n_);
    const auto& m = masks_[j];
    for (std::size_t i = 0; i < n_; ++i) block[i] = (s * m[i]) * x[i];
    fft_.forward_raw(block, block);
  }
}

CVector MeasurementOperator::forward(std::span<const Complex> x) const {
  CVector out(measurement_size());
  forward(x, out);
  return out;
}

void MeasurementOperator::adjoint(std::span<const Complex> y, std::span<Complex> out) const {
  check_length("adjoint input", y.size(), measurement_size());
  check_length("adjoint output", out.size(), n_);
  if (kind_ == OperatorKind::kUnitaryDft) {
    fft_.inverse(y, out);
    return;
  }
  // Per-thread scratch keeps adjoint reentrant without a per-call allocation.
  thread_local CVector scratch;
  scratch.resize(n_);
  const double s = fft_.scale();
  std::fill(out.begin(), out.end(), Complex{0.0, 0.0});
  for (std::size_t j = 0; j < masks_.size(); ++j) {
    fft_.inverse_raw(y.subspan(j * n_, n_), scratch);
    const auto& m = masks_[j];
    for (std::size_t i = 0; i < n_; ++i) out[i] += (s * std::conj(m[i])) * scratch[i];
  }
}

CVector MeasurementOperator::adjoint(std::span<const Complex> y) const {
  CVector out(n_);
  adjoint(y, out);
  return out;
}

std::string MeasurementOperator::describe() const {
  std::ostringstream os;
  os << "kind=" << to_string(kind_) << " n=" << n_;
  if (kind_ == OperatorKind::kCodedDiffraction) os << " K=" << masks_.size();
  os << " measurements=" << measurement_size();
  return os.str();
}

const std::vector<Complex>& octanary_alphabet() {
  static const std::vector<Complex> alphabet = [] {
    const double a = std::sqrt(2.0) / 2.0;
    const double c = std::sqrt(3.0);
    return std::vector<Complex>{{a, 0.0}, {-a, 0.0}, {0.0, a}, {0.0, -a},
                                {c, 0.0}, {-c, 0.0}, {0.0, c}, {0.0, -c}};
  }();
  return alphabet;
}

std::vector<CVector> make_octanary_masks(std::size_t k, std::size_t n, RngSpec spec) {
  if (k == 0) throw std::invalid_argument("make_octanary_masks: k must be >= 1");
  const auto& alphabet = octanary_alphabet();
  Rng rng(spec);
  std::vector<CVector> masks(k, CVector(n));
  for (auto& m : masks) {
    for (auto& v : m) v = alphabet[rng.index(alphabet.size())];
  }
  return masks;
}

}  // namespace sparse_pr
