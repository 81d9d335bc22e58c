#include "sparse_pr_cli/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "sparse_pr/admm.hpp"
#include "sparse_pr/experiment.hpp"
#include "sparse_pr/oracle.hpp"
#include "sparse_pr/signal_io.hpp"
#include "sparse_pr/spr.hpp"

namespace sparse_pr::cli {

namespace {

// Bad flag combinations detected after parsing.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SolveOptions {
  std::string signal;
  std::string measurements;
  std::string truth;
  std::string masks;
  std::string op = "dft";
  std::string method = "l0l1pr";
  std::string out;
  std::string diagnostics;
  std::optional<double> lambda, rho, r1, r2, r_max, snr;
  std::optional<std::size_t> max_iters, s, k;
  std::uint64_t seed = 0;
  bool no_noise = false;
};

struct BenchOptions {
  std::string config;
  std::vector<std::pair<std::string, std::string>> settings;
  std::string out;
  std::string format;
  std::string figure_dir;
  bool no_timing = false;
  bool progress = false;
};

struct MasksOptions {
  std::size_t k = 1;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string out;
};

struct OracleOptions {
  std::string kernel;
  double w = 1.0, b = 1.0, r2 = 1.0;
  double y0 = 0.0, y1 = 0.0, r = 1.0;
  double v_re = 0.0, v_im = 0.0, lambda = 0.0, r1 = 1.0;
  int p = 2;
  std::size_t points = 20001;
  std::size_t grid_side = 201;
};

std::string fmt(double v) { return format_double(v); }

// ---- solve ---------------------------------------------------------------

int run_solve(const SolveOptions& o, std::ostream& out) {
  if (o.signal.empty() == o.measurements.empty()) {
    throw UsageError("solve: give exactly one of --signal or --measurements");
  }
  const auto method = parse_method(o.method);
  if (!method) throw UsageError("solve: unknown --method '" + o.method + "'");
  if (o.no_noise && o.snr && !is_noiseless(*o.snr)) {
    throw UsageError("solve: --no-noise contradicts --snr " + fmt(*o.snr));
  }

  ExperimentConfig cfg;
  cfg.methods = {*method};
  if (o.op == "dft") {
    cfg.op = OperatorKind::kUnitaryDft;
  } else if (o.op == "cdp") {
    cfg.op = OperatorKind::kCodedDiffraction;
  } else {
    throw UsageError("solve: --op must be dft or cdp");
  }
  if (*method == Method::kSPR && cfg.op != OperatorKind::kUnitaryDft) {
    throw UsageError("solve: SPR is only defined for --op dft");
  }

  std::optional<ComplexSignal> truth;
  if (!o.signal.empty()) truth = load_signal(o.signal);
  if (!o.truth.empty()) {
    if (truth) throw UsageError("solve: --truth is only used with --measurements");
    truth = load_signal(o.truth);
  }
  std::optional<Magnitudes> given;
  if (!o.measurements.empty()) given = load_magnitudes(o.measurements);

  std::vector<CVector> masks;
  if (cfg.op == OperatorKind::kCodedDiffraction) {
    if (!o.masks.empty()) {
      masks = load_masks(o.masks);
    } else if (o.k) {
      std::size_t n = truth ? truth->size() : 0;
      if (n == 0) {
        if (given->size() % *o.k != 0) {
          throw UsageError("solve: measurement length is not a multiple of --k");
        }
        n = given->size() / *o.k;
      }
      masks = make_octanary_masks(*o.k, n, {o.seed, 2});
    } else {
      throw UsageError("solve: --op cdp needs --masks or --k");
    }
  } else if (!o.masks.empty() || o.k) {
    throw UsageError("solve: --masks/--k only apply to --op cdp");
  }

  std::size_t n = 0;
  if (cfg.op == OperatorKind::kUnitaryDft) {
    n = truth ? truth->size() : given->size();
  } else {
    n = masks.front().size();
  }
  const MeasurementOperator op = cfg.op == OperatorKind::kUnitaryDft
                                     ? MeasurementOperator::dft(n)
                                     : MeasurementOperator::cdp(std::move(masks));
  if (truth && truth->size() != n) {
    throw UsageError("solve: signal length " + std::to_string(truth->size()) +
                     " does not match operator length " + std::to_string(n));
  }

  const double snr = o.snr.value_or(kNoiseless);
  Magnitudes b = given ? *given : Magnitudes(abs(op.forward(truth->values())));
  if (b.size() != op.measurement_size()) {
    throw UsageError("solve: " + std::to_string(b.size()) + " measurements, operator expects " +
                     std::to_string(op.measurement_size()));
  }
  if (o.no_noise && !b.is_nonnegative()) {
    throw UsageError("solve: --no-noise given but the measurements contain negative entries");
  }
  if (!given) b = add_noise(b, snr, {o.seed, 1});

  std::size_t s = o.s.value_or(0);
  if (s == 0 && truth) s = l0_norm(*truth);
  const SweepPoint point{n, std::max<std::size_t>(s, 1), snr,
                         cfg.op == OperatorKind::kUnitaryDft ? 0 : op.mask_count()};
  SolverOverrides& ov = cfg.per_method[*method];
  ov.lambda = o.lambda;
  ov.rho = o.rho;
  ov.r1_0 = o.r1;
  ov.r2_0 = o.r2;
  ov.r_max = o.r_max;
  ov.max_iters = o.max_iters;

  std::optional<SolverConfig> admm_cfg;
  if (*method != Method::kSPR) {
    admm_cfg = solver_config_for(*method, cfg, point);
    admm_cfg->rng = {o.seed, 3};
    admm_cfg->validate();
  }

  out << "operator: " << op.describe() << '\n';
  out << "method: " << to_string(*method) << '\n';

  ComplexSignal estimate{CVector(n)};
  if (*method == Method::kSPR) {
    if (s == 0) throw UsageError("solve: SPR needs --s (or --signal to infer it)");
    SprConfig sc;
    sc.s = s;
    sc.rng = {o.seed, 3};
    if (o.max_iters) sc.max_iters = *o.max_iters;
    const auto res = spr_solve(b, sc);
    estimate = res.estimate;
    out << "iterations: " << res.iterations << '\n';
    out << "wall_time_s: " << fmt(res.wall_time_s) << '\n';
  } else {
    const SolverConfig& sc = *admm_cfg;
    out << "lambda: " << fmt(sc.lambda) << " p: " << sc.p << " r1_0: " << fmt(sc.r1_0)
        << " r2_0: " << fmt(sc.r2_0) << " rho: " << fmt(sc.rho) << " r_max: " << fmt(sc.r_max)
        << '\n';
    const auto res = admm_solve(op, b, sc);
    estimate = res.estimate;
    const auto kkt = kkt_residuals(res.state, op);
    out << "iterations: " << res.diagnostics.iterations << '\n';
    out << "wall_time_s: " << fmt(res.diagnostics.wall_time_s) << '\n';
    if (!res.diagnostics.samples.empty()) {
      out << "final_energy: " << fmt(res.diagnostics.samples.back().energy) << '\n';
    }
    out << "kkt: x_minus_q=" << fmt(kkt.x_minus_q) << " z_minus_ax=" << fmt(kkt.z_minus_ax)
        << " lam1_minus_adj=" << fmt(kkt.lam1_minus_adj) << '\n';
    if (!o.diagnostics.empty()) write_text_file(o.diagnostics, res.diagnostics.to_json() + "\n");
  }
  out << "l0_norm: " << l0_norm(estimate) << '\n';
  if (truth) {
    const AlignmentPolicy policy = cfg.op == OperatorKind::kUnitaryDft
                                       ? AlignmentPolicy::fourier()
                                       : AlignmentPolicy::phase_only();
    const double e = nmse(estimate.values(), truth->values(), policy);
    out << "nmse: " << fmt(e) << (e <= kDefaultSuccessThreshold ? " (recovered)" : "") << '\n';
  }
  if (!o.out.empty()) save_signal(o.out, estimate.values());
  return kOk;
}

// ---- bench ---------------------------------------------------------------

void print_aggregates(const ResultTable& table, std::ostream& out) {
  out << std::left << std::setw(8) << "method" << std::right << std::setw(7) << "n"
      << std::setw(6) << "s" << std::setw(7) << "snr" << std::setw(4) << "K" << std::setw(8)
      << "trials" << std::setw(8) << "prob" << std::setw(14) << "median_nmse" << std::setw(14)
      << "runtime_s" << '\n';
  for (const auto& a : table.aggregates) {
    std::ostringstream prob, med, rt;
    prob << std::fixed << std::setprecision(2) << a.recovery_probability;
    med << std::scientific << std::setprecision(2) << a.median_nmse;
    rt << std::fixed << std::setprecision(4) << a.mean_runtime_success_s;
    out << std::left << std::setw(8) << a.method << std::right << std::setw(7) << a.n
        << std::setw(6) << a.s << std::setw(7) << fmt(a.snr) << std::setw(4) << a.k_masks
        << std::setw(8) << a.trials << std::setw(8) << prob.str() << std::setw(14) << med.str()
        << std::setw(14) << rt.str() << '\n';
  }
}

int run_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  if (!o.config.empty()) cfg = load_experiment_config(o.config);
  for (const auto& [key, value] : o.settings) apply_setting(cfg, key, value);
  if (!o.figure_dir.empty()) cfg.keep_traces = true;

  ResultFormat format = ResultFormat::kCsv;
  if (o.format == "json") {
    format = ResultFormat::kJson;
  } else if (o.format.empty() && !o.out.empty()) {
    format = format_from_path(o.out) == FileFormat::kJson ? ResultFormat::kJson
                                                          : ResultFormat::kCsv;
  } else if (!o.format.empty() && o.format != "csv") {
    throw UsageError("bench: --format must be csv or json");
  }

  ProgressCallback progress;
  if (o.progress) {
    progress = [&err](std::size_t done, std::size_t total) {
      err << "\r" << done << "/" << total << (done == total ? "\n" : "") << std::flush;
    };
  }
  const ResultTable table = run_experiment(cfg, progress);
  const EmitOptions emit{!o.no_timing};
  if (!o.out.empty()) emit_results(table, format, o.out, emit);
  if (!o.figure_dir.empty()) emit_figure_data(table, o.figure_dir, emit);
  print_aggregates(table, out);
  return kOk;
}

// ---- masks ---------------------------------------------------------------

int run_masks(const MasksOptions& o, std::ostream& out) {
  if (o.k == 0 || o.n == 0) throw UsageError("masks: --k and --n must be >= 1");
  auto masks = make_octanary_masks(o.k, o.n, {o.seed, 2});
  if (!o.out.empty()) save_masks(o.out, masks);
  out << MeasurementOperator::cdp(std::move(masks)).describe() << '\n';
  return kOk;
}

// ---- oracle --------------------------------------------------------------

int run_oracle(const OracleOptions& o, std::ostream& out) {
  const oracle::GridOptions grid{o.points, true};
  double closed_arg = 0.0, closed_val = 0.0;
  oracle::Minimum ref;
  if (o.kernel == "l2" || o.kernel == "l1") {
    if (!(o.w > 0.0)) throw UsageError("oracle: --w must be > 0 (use --kernel degenerate)");
    const MagnitudeFitInput in{o.w, o.b, o.r2};
    if (o.kernel == "l2") {
      closed_arg = magnitude_fit_l2(in);
      closed_val = oracle::objective_l2(closed_arg, in);
      ref = oracle::minimize_l2(in, grid);
    } else {
      closed_arg = magnitude_fit_l1(in);
      closed_val = oracle::objective_l1(closed_arg, in);
      ref = oracle::minimize_l1(in, grid);
    }
  } else if (o.kernel == "soft") {
    closed_arg = constrained_soft_threshold(o.y0, o.y1, o.r);
    closed_val = oracle::objective_soft(closed_arg, o.y0, o.r);
    ref = oracle::minimize_soft(o.y0, o.y1, o.r, grid);
  } else if (o.kernel == "degenerate") {
    closed_arg = degenerate_magnitude(o.b, o.r2, o.p);
    closed_val = oracle::objective_degenerate(closed_arg, o.b, o.r2, o.p);
    ref = oracle::minimize_degenerate(o.b, o.r2, o.p, grid);
  } else if (o.kernel == "hard") {
    const Complex v{o.v_re, o.v_im};
    const Complex q = hard_threshold_q(CVector{v}, CVector(1), o.r1, o.lambda)[0];
    const auto hard = oracle::minimize_hard(v, o.lambda, o.r1, o.grid_side);
    const double val = oracle::objective_hard(q, v, o.lambda, o.r1);
    out << "closed_form: argmin=" << fmt(q.real()) << "," << fmt(q.imag())
        << " objective=" << fmt(val) << '\n';
    out << "oracle: argmin=" << fmt(hard.argmin.real()) << "," << fmt(hard.argmin.imag())
        << " objective=" << fmt(hard.value) << '\n';
    out << "gap: " << fmt(val - hard.value) << '\n';
    return kOk;
  } else {
    throw UsageError("oracle: --kernel must be l2, l1, soft, hard or degenerate");
  }
  out << "closed_form: argmin=" << fmt(closed_arg) << " objective=" << fmt(closed_val) << '\n';
  out << "oracle: argmin=" << fmt(ref.argmin) << " objective=" << fmt(ref.value) << '\n';
  out << "gap: " << fmt(closed_val - ref.value) << '\n';
  return kOk;
}

// Records `--flag value` as a config setting, in command-line order.
void add_setting(CLI::App* app, BenchOptions& o, const std::string& flag, const std::string& key,
                 const std::string& help) {
  app->add_option_function<std::string>(
      flag, [&o, key](const std::string& v) { o.settings.emplace_back(key, v); }, help);
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse phase retrieval: L0-regularized ADMM solvers and benchmarks"};
  app.name("sparse_pr");
  app.require_subcommand(1);

  SolveOptions so;
  auto* solve = app.add_subcommand("solve", "Solve one instance and report NMSE and diagnostics");
  solve->add_option("--signal", so.signal, "Ground-truth signal (CSV/JSON); b = |A x|");
  solve->add_option("--measurements", so.measurements, "Observed magnitudes b (CSV/JSON)");
  solve->add_option("--truth", so.truth, "Ground truth for NMSE when using --measurements");
  solve->add_option("--op", so.op, "Operator: dft or cdp")->check(CLI::IsMember({"dft", "cdp"}));
  solve->add_option("--masks", so.masks, "CDP masks file");
  solve->add_option("--k", so.k, "Generate this many octanary masks (CDP)");
  solve->add_option("--method", so.method, "l0l2pr, l0l1pr or spr");
  solve->add_option("--lambda", so.lambda, "Regularization weight");
  solve->add_option("--rho", so.rho, "Penalty growth factor");
  solve->add_option("--r1", so.r1, "Initial r1");
  solve->add_option("--r2", so.r2, "Initial r2");
  solve->add_option("--r-max", so.r_max, "Penalty cap");
  solve->add_option("--max-iters", so.max_iters, "Iteration cap");
  solve->add_option("--s", so.s, "Sparsity budget (SPR)");
  solve->add_option("--snr", so.snr, "Add noise at this SNR in dB (with --signal)");
  solve->add_flag("--no-noise", so.no_noise, "Assert clean measurements");
  solve->add_option("--seed", so.seed, "Seed for noise, masks and solver start");
  solve->add_option("--out", so.out, "Write the estimate here");
  solve->add_option("--diagnostics", so.diagnostics, "Write solver diagnostics JSON here");

  BenchOptions bo;
  auto* bench = app.add_subcommand("bench", "Run a seeded experiment sweep");
  bench->add_option("--config", bo.config, "INI-style experiment config");
  add_setting(bench, bo, "--method", "methods", "Comma list of l0l2pr, l0l1pr, spr");
  add_setting(bench, bo, "--op", "operator", "dft or cdp");
  add_setting(bench, bo, "--k", "k", "CDP mask counts");
  add_setting(bench, bo, "--n", "n", "Signal lengths, e.g. 128 or 64,128");
  add_setting(bench, bo, "--s", "s", "Sparsities, e.g. 5,10 or 2:30:2");
  add_setting(bench, bo, "--sr", "sr", "Sparsity ratios in percent");
  add_setting(bench, bo, "--snr", "snr", "SNR list in dB; inf for clean data");
  add_setting(bench, bo, "--trials", "trials", "Trials per sweep point");
  add_setting(bench, bo, "--seed", "seed", "Base seed");
  add_setting(bench, bo, "--lambda", "lambda", "Lambda for every L0 method");
  add_setting(bench, bo, "--rho", "rho", "Penalty growth for every L0 method");
  add_setting(bench, bo, "--max-iters", "max_iters", "Iteration cap for every L0 method");
  add_setting(bench, bo, "--success-threshold", "success_threshold", "NMSE success threshold");
  add_setting(bench, bo, "--threads", "threads", "Worker threads");
  bench->add_option_function<std::vector<std::string>>(
      "--set",
      [&bo](const std::vector<std::string>& kvs) {
        for (const auto& kv : kvs) {
          const auto eq = kv.find('=');
          if (eq == std::string::npos) throw CLI::ValidationError("--set", "expected key=value");
          bo.settings.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
        }
      },
      "Any config setting as key=value");
  bench->add_option("--out", bo.out, "Trial results file (.csv or .json)");
  bench->add_option("--format", bo.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  bench->add_flag("--no-timing", bo.no_timing, "Write 0 for wall-clock columns");
  bench->add_option("--emit-figure-data", bo.figure_dir, "Directory for per-figure CSVs");
  bench->add_flag("--progress", bo.progress, "Report progress on stderr");

  MasksOptions mo;
  auto* masks = app.add_subcommand("masks", "Generate octanary CDP masks");
  masks->add_option("--k", mo.k, "Number of masks")->required();
  masks->add_option("--n", mo.n, "Mask length")->required();
  masks->add_option("--seed", mo.seed, "Seed");
  masks->add_option("--out", mo.out, "Output file (.csv or .json)");

  OracleOptions oo;
  auto* orc = app.add_subcommand("oracle", "Compare a closed-form prox kernel to its grid oracle");
  orc->add_option("--kernel", oo.kernel, "l2, l1, soft, hard or degenerate")->required();
  orc->add_option("--w", oo.w, "|W| (l2, l1)");
  orc->add_option("--b", oo.b, "Observed magnitude (l2, l1, degenerate)");
  orc->add_option("--r2", oo.r2, "Penalty r2 (l2, l1, degenerate)");
  orc->add_option("--y0", oo.y0, "Unconstrained centre (soft)");
  orc->add_option("--y1", oo.y1, "Lower bound (soft)");
  orc->add_option("--r", oo.r, "Penalty (soft)");
  orc->add_option("--v-re", oo.v_re, "Re v (hard)");
  orc->add_option("--v-im", oo.v_im, "Im v (hard)");
  orc->add_option("--lambda", oo.lambda, "Lambda (hard)");
  orc->add_option("--r1", oo.r1, "Penalty r1 (hard)");
  orc->add_option("--p", oo.p, "Exponent 1 or 2 (degenerate)");
  orc->add_option("--points", oo.points, "Grid points for 1-D oracles");
  orc->add_option("--grid-side", oo.grid_side, "Grid side for the hard-threshold oracle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  }

  try {
    if (*solve) return run_solve(so, out);
    if (*bench) return run_bench(bo, out, err);
    if (*masks) return run_masks(mo, out);
    return run_oracle(oo, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace sparse_pr::cli
