#include <benchmark/benchmark.h>

#include "sparse_pr/admm.hpp"
#include "sparse_pr/fft.hpp"
#include "sparse_pr/metrics.hpp"
#include "sparse_pr/prox.hpp"
#include "sparse_pr/spr.hpp"

namespace sparse_pr {
namespace {

Magnitudes measurements(const MeasurementOperator& op, std::size_t s) {
  const auto truth = generate_sparse_signal(op.signal_size(), s, {1, 0});
  return Magnitudes(abs(op.forward(truth.signal.values())));
}

// Fixed-step ADMM so every run does exactly the same number of iterations.
void BM_AdmmIteration(benchmark::State& state, std::size_t k) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto op = k == 0 ? MeasurementOperator::dft(n)
                         : MeasurementOperator::cdp(make_octanary_masks(k, n, {2, 2}));
  const auto b = measurements(op, std::max<std::size_t>(1, n / 50));
  auto cfg = SolverConfig::l0l1pr();
  cfg.rho = 1.0;
  cfg.max_iters = 100;
  cfg.sample_every = 100;
  for (auto _ : state) benchmark::DoNotOptimize(admm_solve(op, b, cfg));
  state.SetItemsProcessed(state.iterations() * 100);
  state.SetComplexityN(state.range(0));
}
BENCHMARK_CAPTURE(BM_AdmmIteration, dft, 0)
    ->RangeMultiplier(2)
    ->Range(128, 16384)
    ->Complexity(benchmark::oNLogN)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_AdmmIteration, cdp_k4, 4)
    ->RangeMultiplier(2)
    ->Range(128, 4096)
    ->Complexity(benchmark::oNLogN)
    ->Unit(benchmark::kMillisecond);

void BM_Fft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const UnitaryFft fft(n);
  Rng rng({3, 0});
  const auto x = complex_normal_vector(n, rng);
  CVector y(n);
  for (auto _ : state) {
    fft.forward(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fft)->RangeMultiplier(4)->Range(64, 65536)->Complexity(benchmark::oNLogN);

void BM_UpdateZ(benchmark::State& state, int p) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng({4, 0});
  const auto w = complex_normal_vector(n, rng);
  RVector b(n);
  for (auto& v : b) v = 2.0 * rng.uniform();
  CVector z(n);
  for (auto _ : state) {
    update_z(w, b, 0.5, p, z);
    benchmark::DoNotOptimize(z.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_UpdateZ, l2, 2)->Arg(4096);
BENCHMARK_CAPTURE(BM_UpdateZ, l1, 1)->Arg(4096);

void BM_HardThreshold(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng({5, 0});
  const auto x = complex_normal_vector(n, rng);
  const auto lam1 = complex_normal_vector(n, rng);
  CVector q(n);
  for (auto _ : state) {
    hard_threshold_q(x, lam1, 1.0, 0.5, q);
    benchmark::DoNotOptimize(q.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HardThreshold)->Arg(4096);

void BM_Nmse(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng({6, 0});
  const auto x = complex_normal_vector(n, rng);
  const auto y = complex_normal_vector(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(nmse(y, x, AlignmentPolicy::fourier()));
}
BENCHMARK(BM_Nmse)->Arg(128)->Arg(1024);

void BM_SprIteration(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto b = measurements(MeasurementOperator::dft(n), n / 50 + 1);
  SprConfig cfg;
  cfg.s = n / 50 + 1;
  cfg.max_iters = 100;
  cfg.tol = 1e-300;
  for (auto _ : state) benchmark::DoNotOptimize(spr_solve(b, cfg));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_SprIteration)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace sparse_pr

BENCHMARK_MAIN();
