#include "sparse_pr/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "sparse_pr/spr.hpp"

namespace sparse_pr {

namespace {

// Substreams of a trial seed.
constexpr std::uint64_t kStreamSignal = 0;
constexpr std::uint64_t kStreamNoise = 1;
constexpr std::uint64_t kStreamMasks = 2;
constexpr std::uint64_t kStreamSolver = 3;

}  // namespace

std::uint64_t trial_seed(std::uint64_t base_seed, const SweepPoint& point, std::size_t trial) {
  std::uint64_t h = mix64(base_seed);
  h = hash_combine(h, point.n);
  h = hash_combine(h, point.s);
  h = hash_combine(h, std::bit_cast<std::uint64_t>(is_noiseless(point.snr) ? kNoiseless
                                                                            : point.snr));
  h = hash_combine(h, point.k_masks);
  return hash_combine(h, trial);
}

std::vector<AggregateRow> aggregate(std::span<const TrialResult> rows) {
  std::vector<AggregateRow> out;
  std::vector<std::vector<const TrialResult*>> groups;
  for (const auto& r : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const AggregateRow& a) {
      return a.method == r.method && a.n == r.n && a.s == r.s && a.k_masks == r.k_masks &&
             (a.snr == r.snr || (std::isnan(a.snr) && std::isnan(r.snr)));
    });
    if (it == out.end()) {
      AggregateRow a;
      a.method = r.method;
      a.n = r.n;
      a.s = r.s;
      a.snr = r.snr;
      a.k_masks = r.k_masks;
      out.push_back(a);
      groups.emplace_back();
      it = out.end() - 1;
    }
    groups[static_cast<std::size_t>(it - out.begin())].push_back(&r);
  }
  for (std::size_t g = 0; g < out.size(); ++g) {
    auto& a = out[g];
    const auto& members = groups[g];
    a.trials = members.size();
    double nmse_sum = 0.0;
    double runtime_sum = 0.0;
    double iter_sum = 0.0;
    std::vector<double> nmses;
    for (const auto* r : members) {
      nmse_sum += r->nmse;
      iter_sum += static_cast<double>(r->iterations);
      nmses.push_back(r->nmse);
      if (r->success) {
        ++a.successes;
        runtime_sum += r->wall_time_s;
      }
    }
    const double count = static_cast<double>(a.trials);
    a.recovery_probability = static_cast<double>(a.successes) / count;
    a.mean_nmse = nmse_sum / count;
    a.mean_iterations = iter_sum / count;
    a.mean_runtime_success_s = a.successes > 0 ? runtime_sum / static_cast<double>(a.successes)
                                               : std::numeric_limits<double>::quiet_NaN();
    std::sort(nmses.begin(), nmses.end());
    const std::size_t mid = nmses.size() / 2;
    a.median_nmse = nmses.size() % 2 == 1 ? nmses[mid] : 0.5 * (nmses[mid - 1] + nmses[mid]);
  }
  return out;
}

std::vector<TrialResult> run_trial(const ExperimentConfig& cfg, const SweepPoint& point,
                                   std::size_t trial, std::vector<EnergyTrace>* traces) {
  const std::uint64_t seed = trial_seed(cfg.base_seed, point, trial);
  const auto truth =
      generate_sparse_signal(point.n, point.s, {seed, kStreamSignal}, cfg.complex_signals);
  const MeasurementOperator op =
      cfg.op == OperatorKind::kUnitaryDft
          ? MeasurementOperator::dft(point.n)
          : MeasurementOperator::cdp(
                make_octanary_masks(point.k_masks, point.n, {seed, kStreamMasks}));
  const Magnitudes clean(abs(op.forward(truth.signal.values())));
  const Magnitudes b = add_noise(clean, point.snr, {seed, kStreamNoise});
  const AlignmentPolicy policy = cfg.op == OperatorKind::kUnitaryDft
                                     ? AlignmentPolicy::fourier()
                                     : AlignmentPolicy::phase_only();

  std::vector<TrialResult> results;
  for (Method method : cfg.methods) {
    TrialResult r;
    r.method = to_string(method);
    r.n = point.n;
    r.s = point.s;
    r.snr = point.snr;
    r.k_masks = point.k_masks;
    r.seed = seed;
    try {
      if (method == Method::kSPR) {
        SprConfig spr{point.s, cfg.spr_max_iters, cfg.spr_tol, {seed, kStreamSolver}};
        const auto res = spr_solve(b, spr);
        r.nmse = nmse(res.estimate.values(), truth.signal.values(), policy);
        r.iterations = res.iterations;
        r.wall_time_s = res.wall_time_s;
      } else {
        SolverConfig scfg = solver_config_for(method, cfg, point);
        scfg.rng = {seed, kStreamSolver};
        const auto res = admm_solve(op, b, scfg);
        r.nmse = nmse(res.estimate.values(), truth.signal.values(), policy);
        r.iterations = res.diagnostics.iterations;
        r.wall_time_s = res.diagnostics.wall_time_s;
        if (traces != nullptr) {
          EnergyTrace t{r.method, r.n, r.s, r.snr, r.k_masks, {}, {}};
          for (const auto& sample : res.diagnostics.samples) {
            t.iterations.push_back(sample.iteration);
            t.energy.push_back(sample.energy);
          }
          traces->push_back(std::move(t));
        }
      }
    } catch (const DivergedError& e) {
      r.nmse = std::numeric_limits<double>::infinity();
      r.iterations = e.iteration();
    }
    r.success = r.nmse <= cfg.success_threshold;
    results.push_back(std::move(r));
  }
  return results;
}

std::size_t worker_count(const ExperimentConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("SPARSE_PR_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ResultTable run_experiment(const ExperimentConfig& cfg, const ProgressCallback& progress) {
  cfg.validate();
  const auto points = sweep_points(cfg);
  // Resolve solver defaults up front so config errors surface before any work.
  for (const auto& p : points) {
    for (Method m : cfg.methods) {
      if (m != Method::kSPR) solver_config_for(m, cfg, p).validate();
    }
  }

  const std::size_t jobs = points.size() * cfg.trials;
  std::vector<std::vector<TrialResult>> slots(jobs);
  std::vector<std::vector<EnergyTrace>> trace_slots(points.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mu;
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    while (true) {
      const std::size_t job = next.fetch_add(1);
      if (job >= jobs) return;
      const std::size_t pi = job / cfg.trials;
      const std::size_t trial = job % cfg.trials;
      auto* traces = cfg.keep_traces && trial == 0 ? &trace_slots[pi] : nullptr;
      try {
        slots[job] = run_trial(cfg, points[pi], trial, traces);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(jobs);
        return;
      }
      const std::size_t finished = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mu);
        progress(finished, jobs);
      }
    }
  };

  const std::size_t workers = std::min(worker_count(cfg), std::max<std::size_t>(jobs, 1));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  }

  if (failure) std::rethrow_exception(failure);

  ResultTable table;
  for (auto& slot : slots) {
    for (auto& r : slot) table.rows.push_back(std::move(r));
  }
  for (auto& t : trace_slots) {
    for (auto& tr : t) table.traces.push_back(std::move(tr));
  }
  table.aggregates = aggregate(table.rows);
  return table;
}

}  // namespace sparse_pr
