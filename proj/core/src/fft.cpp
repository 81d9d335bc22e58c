#include "sparse_pr/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace sparse_pr {

namespace {

// FFTW's planner is not thread-safe; every plan goes through this cache.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n, int sign, bool in_place) {
    std::lock_guard<std::mutex> lock(mu_);
    const auto key = std::make_tuple(n, sign, in_place);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;

    // Plan on scratch arrays with FFTW_UNALIGNED so execution works on any
    // std::vector storage.
    auto* a = fftw_alloc_complex(n);
    auto* b = in_place ? a : fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), a, b, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (b != a) fftw_free(b);
    fftw_free(a);
    if (plan == nullptr) throw std::runtime_error("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mu_;
  std::map<std::tuple<std::size_t, int, bool>, fftw_plan> plans_;
};

}  // namespace

UnitaryFft::UnitaryFft(std::size_t n) : n_(n), scale_(1.0 / std::sqrt(static_cast<double>(n))) {
  if (n == 0) throw std::invalid_argument("UnitaryFft: length must be >= 1");
  auto& cache = PlanCache::instance();
  forward_oop_ = cache.get(n, FFTW_FORWARD, false);
  forward_inplace_ = cache.get(n, FFTW_FORWARD, true);
  inverse_oop_ = cache.get(n, FFTW_BACKWARD, false);
  inverse_inplace_ = cache.get(n, FFTW_BACKWARD, true);
}

void UnitaryFft::execute(int sign, std::span<const Complex> in, std::span<Complex> out) const {
  if (in.size() != n_ || out.size() != n_) {
    throw std::invalid_argument("UnitaryFft: expected length " + std::to_string(n_));
  }
  const bool in_place = static_cast<const void*>(in.data()) == static_cast<void*>(out.data());
  void* plan = sign == FFTW_FORWARD ? (in_place ? forward_inplace_ : forward_oop_)
                                    : (in_place ? inverse_inplace_ : inverse_oop_);
  // c2c out-of-place plans leave the input untouched.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan), src, dst);
}

void UnitaryFft::forward_raw(std::span<const Complex> in, std::span<Complex> out) const {
  execute(FFTW_FORWARD, in, out);
}

void UnitaryFft::inverse_raw(std::span<const Complex> in, std::span<Complex> out) const {
  execute(FFTW_BACKWARD, in, out);
}

void UnitaryFft::forward(std::span<const Complex> in, std::span<Complex> out) const {
  execute(FFTW_FORWARD, in, out);
  for (auto& c : out) c *= scale_;
}

void UnitaryFft::inverse(std::span<const Complex> in, std::span<Complex> out) const {
  execute(FFTW_BACKWARD, in, out);
  for (auto& c : out) c *= scale_;
}

}  // namespace sparse_pr
