#include "sparse_pr/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "sparse_pr/signal_io.hpp"

namespace sparse_pr {

std::string to_string(Method m) {
  switch (m) {
    case Method::kL0L2PR:
      return "L0L2PR";
    case Method::kL0L1PR:
      return "L0L1PR";
    case Method::kSPR:
      return "SPR";
  }
  return "?";
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> out;
  for (auto cell : split_csv_line(value)) {
    cell = trim(cell);
    if (!cell.empty()) out.push_back(cell);
  }
  return out;
}

std::uint64_t to_unsigned(std::string_view field, std::string_view s) {
  s = trim(s);
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError(std::string(field), "expected a non-negative integer, got '" +
                                              std::string(s) + "'");
  }
  return v;
}

double to_double(std::string_view field, std::string_view s) {
  try {
    return parse_double(trim(s));
  } catch (const std::invalid_argument&) {
    throw ConfigError(std::string(field), "expected a number, got '" + std::string(s) + "'");
  }
}

bool to_bool(std::string_view field, std::string_view s) {
  const std::string v = lower(trim(s));
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError(std::string(field), "expected a boolean, got '" + std::string(s) + "'");
}

// "2,4,6", "2:30" or "2:30:2" (inclusive ranges).
std::vector<std::size_t> to_size_list(std::string_view field, std::string_view value) {
  std::vector<std::size_t> out;
  for (auto cell : split_list(value)) {
    const auto c1 = cell.find(':');
    if (c1 == std::string_view::npos) {
      out.push_back(to_unsigned(field, cell));
      continue;
    }
    const auto rest = cell.substr(c1 + 1);
    const auto c2 = rest.find(':');
    const std::size_t lo = to_unsigned(field, cell.substr(0, c1));
    const std::size_t hi = to_unsigned(field, rest.substr(0, c2));
    const std::size_t step =
        c2 == std::string_view::npos ? 1 : to_unsigned(field, rest.substr(c2 + 1));
    if (step == 0 || hi < lo) throw ConfigError(std::string(field), "bad range '" +
                                                                        std::string(cell) + "'");
    for (std::size_t v = lo; v <= hi; v += step) out.push_back(v);
  }
  return out;
}

std::vector<double> to_double_list(std::string_view field, std::string_view value) {
  std::vector<double> out;
  for (auto cell : split_list(value)) {
    const std::string v = lower(cell);
    out.push_back(v == "none" || v == "clean" || v == "noiseless" ? kNoiseless
                                                                  : to_double(field, cell));
  }
  return out;
}

void set_override(SolverOverrides& o, std::string_view field, std::string_view key,
                  std::string_view value) {
  if (key == "lambda") {
    o.lambda = to_double(field, value);
  } else if (key == "rho") {
    o.rho = to_double(field, value);
  } else if (key == "r1" || key == "r1_0") {
    o.r1_0 = to_double(field, value);
  } else if (key == "r2" || key == "r2_0") {
    o.r2_0 = to_double(field, value);
  } else if (key == "r0") {
    o.r1_0 = o.r2_0 = to_double(field, value);
  } else if (key == "r_max") {
    o.r_max = to_double(field, value);
  } else if (key == "max_iters") {
    o.max_iters = to_unsigned(field, value);
  } else {
    throw ConfigError(std::string(field), "unknown solver setting");
  }
}

// Per-SNR lambda for noisy Fourier data.
std::optional<double> noisy_lambda(Method m, double snr) {
  struct Entry {
    double snr, l2, l1;
  };
  static constexpr Entry kTable[] = {{40.0, 1e-4, 2e-2}, {30.0, 5e-4, 8e-3}, {20.0, 3e-3, 1.5e-3}};
  for (const auto& e : kTable) {
    if (snr == e.snr) return m == Method::kL0L2PR ? e.l2 : e.l1;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Method> parse_method(std::string_view name) {
  const std::string v = lower(trim(name));
  if (v == "l0l2pr") return Method::kL0L2PR;
  if (v == "l0l1pr") return Method::kL0L1PR;
  if (v == "spr") return Method::kSPR;
  return std::nullopt;
}

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

void SolverOverrides::apply_to(SolverConfig& cfg) const {
  if (lambda) cfg.lambda = *lambda;
  if (rho) cfg.rho = *rho;
  if (r1_0) cfg.r1_0 = *r1_0;
  if (r2_0) cfg.r2_0 = *r2_0;
  if (r_max) cfg.r_max = *r_max;
  if (max_iters) cfg.max_iters = *max_iters;
}

void ExperimentConfig::validate() const {
  if (methods.empty()) throw ConfigError("methods", "at least one method is required");
  if (n_list.empty()) throw ConfigError("n", "at least one signal length is required");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw ConfigError("n[" + std::to_string(i) + "]", "must be >= 1");
  }
  if (s_list.empty() == sr_percent.empty()) {
    throw ConfigError("s", "give exactly one of an s list or an sr list");
  }
  for (std::size_t i = 0; i < s_list.size(); ++i) {
    const std::string f = "s[" + std::to_string(i) + "]";
    if (s_list[i] < 1) throw ConfigError(f, "must be >= 1");
    for (std::size_t n : n_list) {
      if (s_list[i] > n) throw ConfigError(f, "exceeds signal length " + std::to_string(n));
    }
  }
  for (std::size_t i = 0; i < sr_percent.size(); ++i) {
    const std::string f = "sr[" + std::to_string(i) + "]";
    if (!(sr_percent[i] > 0.0) || sr_percent[i] > 100.0) throw ConfigError(f, "must be in (0, 100]");
  }
  if (snr_list.empty()) throw ConfigError("snr", "at least one SNR value is required");
  for (std::size_t i = 0; i < snr_list.size(); ++i) {
    if (std::isnan(snr_list[i]) || snr_list[i] == -std::numeric_limits<double>::infinity()) {
      throw ConfigError("snr[" + std::to_string(i) + "]", "must be a dB value or 'inf'");
    }
  }
  if (trials < 1) throw ConfigError("trials", "must be >= 1");
  if (op == OperatorKind::kCodedDiffraction) {
    if (k_masks.empty()) throw ConfigError("k", "CDP needs at least one mask count");
    for (std::size_t i = 0; i < k_masks.size(); ++i) {
      if (k_masks[i] < 1) throw ConfigError("k[" + std::to_string(i) + "]", "must be >= 1");
    }
    if (std::find(methods.begin(), methods.end(), Method::kSPR) != methods.end()) {
      throw ConfigError("methods", "SPR is only defined for the plain DFT operator");
    }
  }
  if (!(success_threshold >= 0.0)) throw ConfigError("success_threshold", "must be >= 0");
  if (spr_max_iters < 1) throw ConfigError("spr.max_iters", "must be >= 1");
  if (!(spr_tol > 0.0)) throw ConfigError("spr.tol", "must be > 0");
}

std::size_t sparsity_from_ratio(double sr_percent, std::size_t n) {
  // The small slack keeps exact products (e.g. 10% of 100) from rounding up.
  const double raw = sr_percent * static_cast<double>(n) / 100.0;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(raw - 1e-9)));
}

std::vector<SweepPoint> sweep_points(const ExperimentConfig& cfg) {
  std::vector<SweepPoint> out;
  const std::vector<std::size_t> ks =
      cfg.op == OperatorKind::kCodedDiffraction ? cfg.k_masks : std::vector<std::size_t>{0};
  for (std::size_t k : ks) {
    for (std::size_t n : cfg.n_list) {
      std::vector<std::size_t> sparsities = cfg.s_list;
      for (double sr : cfg.sr_percent) sparsities.push_back(sparsity_from_ratio(sr, n));
      for (std::size_t s : sparsities) {
        for (double snr : cfg.snr_list) {
          out.push_back({n, s, is_noiseless(snr) ? kNoiseless : snr, k});
        }
      }
    }
  }
  return out;
}

SolverConfig solver_config_for(Method method, const ExperimentConfig& cfg,
                               const SweepPoint& point) {
  if (method == Method::kSPR) {
    throw std::invalid_argument("solver_config_for: SPR has no ADMM configuration");
  }
  SolverConfig sc = method == Method::kL0L2PR ? SolverConfig::l0l2pr() : SolverConfig::l0l1pr();
  if (cfg.op == OperatorKind::kCodedDiffraction) {
    // lambda 2e-2, r1 1e-5, r2 1e-6, r_max 100 are stated for a transform
    // without the 1/sqrt(n) factor. Scaling A by sqrt(n) maps to the unitary
    // operator with lambda, r1, r_max divided by sqrt(n) and r2 multiplied.
    const double root_n = std::sqrt(static_cast<double>(point.n));
    sc.lambda = 2e-2 / root_n;
    sc.r1_0 = 1e-5 / root_n;
    sc.r2_0 = 1e-6 * root_n;
    sc.r_max = 100.0 / root_n;
    sc.rho = 1.0005;
  }
  const auto per = cfg.per_method.find(method);
  const bool lambda_given =
      cfg.common.lambda.has_value() || (per != cfg.per_method.end() && per->second.lambda);
  if (!is_noiseless(point.snr)) {
    sc.rho = 1.0001;
    if (auto l = noisy_lambda(method, point.snr)) {
      sc.lambda = *l;
    } else if (!lambda_given) {
      throw ConfigError(method == Method::kL0L2PR ? "l0l2pr.lambda" : "l0l1pr.lambda",
                        "no default lambda for SNR " + format_double(point.snr) +
                            " dB; pass --lambda");
    }
  }
  cfg.common.apply_to(sc);
  if (per != cfg.per_method.end()) per->second.apply_to(sc);
  return sc;
}

void apply_setting(ExperimentConfig& cfg, std::string_view raw_key, std::string_view value) {
  const std::string key = lower(trim(raw_key));
  value = trim(value);
  if (key == "methods" || key == "method") {
    cfg.methods.clear();
    for (auto cell : split_list(value)) {
      auto m = parse_method(cell);
      if (!m) throw ConfigError("methods", "unknown method '" + std::string(cell) + "'");
      cfg.methods.push_back(*m);
    }
  } else if (key == "operator" || key == "op") {
    const std::string v = lower(value);
    if (v == "dft") {
      cfg.op = OperatorKind::kUnitaryDft;
    } else if (v == "cdp") {
      cfg.op = OperatorKind::kCodedDiffraction;
    } else {
      throw ConfigError("operator", "expected 'dft' or 'cdp'");
    }
  } else if (key == "k" || key == "k_masks") {
    cfg.k_masks = to_size_list("k", value);
  } else if (key == "n") {
    cfg.n_list = to_size_list("n", value);
  } else if (key == "s") {
    cfg.s_list = to_size_list("s", value);
    cfg.sr_percent.clear();
  } else if (key == "sr") {
    cfg.sr_percent = to_double_list("sr", value);
    cfg.s_list.clear();
  } else if (key == "snr") {
    cfg.snr_list = to_double_list("snr", value);
  } else if (key == "trials") {
    cfg.trials = to_unsigned("trials", value);
  } else if (key == "seed" || key == "base_seed") {
    cfg.base_seed = to_unsigned("seed", value);
  } else if (key == "success_threshold") {
    cfg.success_threshold = to_double("success_threshold", value);
  } else if (key == "spr.max_iters") {
    cfg.spr_max_iters = to_unsigned(key, value);
  } else if (key == "spr.tol") {
    cfg.spr_tol = to_double(key, value);
  } else if (key == "complex") {
    cfg.complex_signals = to_bool("complex", value);
  } else if (key == "threads") {
    cfg.threads = to_unsigned("threads", value);
  } else if (key == "traces") {
    cfg.keep_traces = to_bool("traces", value);
  } else if (const auto dot = key.find('.'); dot != std::string::npos) {
    const auto m = parse_method(std::string_view(key).substr(0, dot));
    if (!m || *m == Method::kSPR) throw ConfigError(key, "unknown setting");
    set_override(cfg.per_method[*m], key, std::string_view(key).substr(dot + 1), value);
  } else {
    set_override(cfg.common, key, key, value);
  }
}

ExperimentConfig parse_experiment_config(std::string_view text, ExperimentConfig base) {
  std::size_t lineno = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++lineno;
    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
    }
    apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path,
                                        ExperimentConfig base) {
  return parse_experiment_config(read_text_file(path), std::move(base));
}

}  // namespace sparse_pr
