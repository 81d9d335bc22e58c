#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sparse_pr/admm.hpp"
#include "sparse_pr/metrics.hpp"
#include "sparse_pr/operators.hpp"

namespace sparse_pr {

enum class Method { kL0L2PR, kL0L1PR, kSPR };

std::string to_string(Method m);
// Case-insensitive "l0l2pr" / "l0l1pr" / "spr".
std::optional<Method> parse_method(std::string_view name);

// Invalid experiment settings. field() is a dotted path such as "s[2]" or
// "l0l1pr.lambda".
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct SolverOverrides {
  std::optional<double> lambda;
  std::optional<double> rho;
  std::optional<double> r1_0;
  std::optional<double> r2_0;
  std::optional<double> r_max;
  std::optional<std::size_t> max_iters;

  void apply_to(SolverConfig& cfg) const;
};

struct ExperimentConfig {
  std::vector<Method> methods{Method::kL0L2PR, Method::kL0L1PR, Method::kSPR};
  OperatorKind op = OperatorKind::kUnitaryDft;
  std::vector<std::size_t> k_masks{1};  // CDP only
  std::vector<std::size_t> n_list{128};
  // Exactly one of s_list / sr_percent is non-empty. s = ceil(SR * n / 100).
  std::vector<std::size_t> s_list;
  std::vector<double> sr_percent;
  std::vector<double> snr_list{kNoiseless};
  std::size_t trials = 100;
  std::uint64_t base_seed = 0;
  SolverOverrides common;  // every L0 method
  std::map<Method, SolverOverrides> per_method;
  double success_threshold = kDefaultSuccessThreshold;
  std::size_t spr_max_iters = 10000;
  double spr_tol = 1e-8;
  bool complex_signals = true;
  std::size_t threads = 0;   // 0: SPARSE_PR_THREADS, else hardware concurrency
  bool keep_traces = false;  // energy trace of trial 0 per L0 method and point

  // Throws ConfigError for the first invalid field.
  void validate() const;
};

struct SweepPoint {
  std::size_t n = 0;
  std::size_t s = 0;
  double snr = kNoiseless;
  std::size_t k_masks = 0;  // 0 for DFT
};

std::size_t sparsity_from_ratio(double sr_percent, std::size_t n);
std::vector<SweepPoint> sweep_points(const ExperimentConfig& cfg);

// Default per-method parameters for a sweep point, then overrides:
//  - DFT, noiseless: the L0L2PR / L0L1PR defaults.
//  - CDP, noiseless: lambda 2e-2, r1 1e-5, r2 1e-6, r_max 100, rho 1.0005 as
//    given for an unnormalized transform, rescaled to the unitary operator
//    (lambda, r1, r_max over sqrt(n); r2 times sqrt(n)).
//  - noisy: rho 1.0001 and lambda by SNR (40/30/20 dB); other SNRs need an
//    explicit lambda override or a ConfigError is thrown.
SolverConfig solver_config_for(Method method, const ExperimentConfig& cfg,
                               const SweepPoint& point);

// Stable per-trial seed; independent of which other points are in the sweep.
std::uint64_t trial_seed(std::uint64_t base_seed, const SweepPoint& point, std::size_t trial);

struct AggregateRow {
  std::string method;
  std::size_t n = 0;
  std::size_t s = 0;
  double snr = kNoiseless;
  std::size_t k_masks = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double recovery_probability = 0.0;
  double mean_nmse = 0.0;
  double median_nmse = 0.0;
  double mean_runtime_success_s = 0.0;  // NaN when nothing succeeded
  double mean_iterations = 0.0;

  double sr_percent() const { return 100.0 * static_cast<double>(s) / static_cast<double>(n); }
  friend bool operator==(const AggregateRow&, const AggregateRow&) = default;
};

struct EnergyTrace {
  std::string method;
  std::size_t n = 0;
  std::size_t s = 0;
  double snr = kNoiseless;
  std::size_t k_masks = 0;
  std::vector<std::size_t> iterations;
  std::vector<double> energy;
};

struct ResultTable {
  std::vector<TrialResult> rows;  // ordered by (point, trial, method)
  std::vector<AggregateRow> aggregates;
  std::vector<EnergyTrace> traces;
};

// Groups rows by (method, n, s, snr, k_masks) in first-appearance order.
std::vector<AggregateRow> aggregate(std::span<const TrialResult> rows);

// One trial of every configured method on a shared (signal, noise) draw.
std::vector<TrialResult> run_trial(const ExperimentConfig& cfg, const SweepPoint& point,
                                   std::size_t trial, std::vector<EnergyTrace>* traces = nullptr);

using ProgressCallback = std::function<void(std::size_t done, std::size_t total)>;

// Validates cfg (ConfigError), then runs every (point, trial) on a bounded
// worker pool. Output order does not depend on the thread count.
ResultTable run_experiment(const ExperimentConfig& cfg, const ProgressCallback& progress = {});

std::size_t worker_count(const ExperimentConfig& cfg);

// ---- config text ---------------------------------------------------------

// Applies one `key = value` setting (also used for CLI flag overrides).
// Integer lists accept "a,b,c" and ranges "lo:hi" or "lo:hi:step".
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

// Flat INI-style text: one `key = value` per line, '#' or ';' comments,
// [section] headers are ignored.
ExperimentConfig parse_experiment_config(std::string_view text,
                                         ExperimentConfig base = ExperimentConfig{});
ExperimentConfig load_experiment_config(const std::filesystem::path& path,
                                        ExperimentConfig base = ExperimentConfig{});

// ---- result files --------------------------------------------------------

enum class ResultFormat { kCsv, kJson };

// Drops wall-clock columns (writes 0) so reruns compare byte-for-byte.
struct EmitOptions {
  bool include_timing = true;
};

std::string trials_to_csv(std::span<const TrialResult> rows, const EmitOptions& opt = {});
std::vector<TrialResult> trials_from_csv(std::string_view text);
std::string aggregates_to_csv(std::span<const AggregateRow> rows, const EmitOptions& opt = {});
std::string table_to_json(const ResultTable& table, const EmitOptions& opt = {});

// CSV: trials to `path`, aggregates to `<stem>_aggregate.csv` beside it.
// JSON: one document with "trials" and "aggregates". Throws IoError.
void emit_results(const ResultTable& table, ResultFormat format,
                  const std::filesystem::path& path, const EmitOptions& opt = {});
std::filesystem::path aggregate_path_for(const std::filesystem::path& path);

// Per-figure aggregate CSVs for the plotting tool, written into `dir`:
// prob_vs_sparsity.csv, nmse_vs_sparsity.csv, time_vs_sparsity.csv,
// time_vs_length.csv and energy_trace.csv.
void emit_figure_data(const ResultTable& table, const std::filesystem::path& dir,
                      const EmitOptions& opt = {});

}  // namespace sparse_pr
