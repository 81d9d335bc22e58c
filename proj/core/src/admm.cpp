#include "sparse_pr/admm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <nlohmann/json.hpp>

#include "sparse_pr/prox.hpp"

namespace sparse_pr {

SolverConfig SolverConfig::l0l2pr() {
  SolverConfig cfg;
  cfg.lambda = 1e-4;
  cfg.p = 2;
  cfg.r1_0 = 1e-3;
  cfg.r2_0 = 1e-3;
  cfg.rho = 1.0005;
  cfg.r_max = 100.0;
  return cfg;
}

SolverConfig SolverConfig::l0l1pr() {
  SolverConfig cfg;
  cfg.lambda = 1e-3;
  cfg.p = 1;
  cfg.r1_0 = 1e-2;
  cfg.r2_0 = 1e-2;
  cfg.rho = 1.0005;
  cfg.r_max = 100.0;
  return cfg;
}

void SolverConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("solver config: " + msg); };
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail("lambda must be finite and >= 0");
  if (p != 1 && p != 2) fail("p must be 1 or 2");
  if (!(r1_0 > 0.0) || !std::isfinite(r1_0)) fail("r1_0 must be finite and > 0");
  if (!(r2_0 > 0.0) || !std::isfinite(r2_0)) fail("r2_0 must be finite and > 0");
  if (!(rho >= 1.0) || !std::isfinite(rho)) fail("rho must be finite and >= 1");
  if (!(r_max >= r1_0) || !std::isfinite(r_max)) fail("r_max must be finite and >= r1_0");
  if (rho == 1.0 && !max_iters) fail("rho == 1 requires max_iters");
  if (max_iters && *max_iters == 0) fail("max_iters must be >= 1");
  if (sample_every == 0) fail("sample_every must be >= 1");
}

std::optional<std::size_t> termination_count(const SolverConfig& cfg) {
  if (cfg.rho == 1.0) return std::nullopt;
  const double steps = std::ceil(std::log(cfg.r_max / cfg.r1_0) / std::log(cfg.rho));
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::max(steps, 0.0)));
}

std::vector<double> Diagnostics::energy_trace() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.energy);
  return out;
}

std::string Diagnostics::to_json() const {
  nlohmann::json j;
  j["iterations"] = iterations;
  j["wall_time_s"] = wall_time_s;
  auto& arr = j["samples"] = nlohmann::json::array();
  for (const auto& s : samples) {
    arr.push_back({{"iteration", s.iteration},
                   {"energy", s.energy},
                   {"x_minus_q", s.x_minus_q},
                   {"z_minus_ax", s.z_minus_ax}});
  }
  return j.dump();
}

DivergedError::DivergedError(std::size_t iteration, SolverState last_finite)
    : std::runtime_error("ADMM iterate became non-finite at iteration " +
                         std::to_string(iteration)),
      iteration_(iteration),
      last_finite_(std::move(last_finite)) {}

SolverState initialize(const SolverConfig& cfg, const MeasurementOperator& op) {
  Rng rng(cfg.rng);
  SolverState s;
  s.q = complex_normal_vector(op.signal_size(), rng);
  s.z = complex_normal_vector(op.measurement_size(), rng);
  s.x.assign(op.signal_size(), Complex{});
  s.lam1.assign(op.signal_size(), Complex{});
  s.lam2.assign(op.measurement_size(), Complex{});
  s.r1 = cfg.r1_0;
  s.r2 = cfg.r2_0;
  s.n = 0;
  return s;
}

double energy(std::span<const Complex> q, std::span<const Complex> z, std::span<const double> b,
              double lambda, int p) {
  if (z.size() != b.size()) throw std::invalid_argument("energy: |z| and b differ in length");
  if (p != 1 && p != 2) throw std::invalid_argument("energy: p must be 1 or 2");
  double fit = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double d = b[i] - std::abs(z[i]);
    fit += p == 2 ? d * d : std::abs(d);
  }
  return lambda * static_cast<double>(l0_norm(q)) + fit / p;
}

namespace {

double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

KktResiduals kkt_residuals(const SolverState& state, const MeasurementOperator& op) {
  const CVector ax = op.forward(state.x);
  const CVector adj = op.adjoint(state.lam2);
  return {max_abs_diff(state.x, state.q), max_abs_diff(state.z, ax),
          max_abs_diff(state.lam1, adj)};
}

SolveResult admm_solve(const MeasurementOperator& op, const Magnitudes& b,
                       const SolverConfig& cfg, const SampleCallback& on_sample) {
  cfg.validate();
  return admm_solve_from(op, b, cfg, initialize(cfg, op), on_sample);
}

SolveResult admm_solve_from(const MeasurementOperator& op, const Magnitudes& b,
                            const SolverConfig& cfg, SolverState s,
                            const SampleCallback& on_sample) {
  cfg.validate();
  const std::size_t n_sig = op.signal_size();
  const std::size_t n_meas = op.measurement_size();
  if (b.size() != n_meas) {
    throw std::invalid_argument("admm_solve: b has length " + std::to_string(b.size()) +
                                ", operator expects " + std::to_string(n_meas));
  }
  if (s.x.size() != n_sig || s.q.size() != n_sig || s.lam1.size() != n_sig ||
      s.z.size() != n_meas || s.lam2.size() != n_meas) {
    throw std::invalid_argument("admm_solve: state dimensions do not match the operator");
  }

  const auto start = std::chrono::steady_clock::now();
  const std::size_t cap = cfg.max_iters ? *cfg.max_iters : *termination_count(cfg) + 1;
  const auto bv = b.values();

  CVector ax(n_meas);
  CVector w(n_meas);
  SolverState snapshot = s;
  Diagnostics diag;

  // r^n = r^0 rho^n is recomputed from n each step so the schedule never drifts.
  auto penalty = [&](double r0, std::size_t n) {
    return r0 * std::pow(cfg.rho, static_cast<double>(n));
  };
  auto record = [&](double x_minus_q, double z_minus_ax) {
    IterationSample sample{s.n, energy(s.q, s.z, bv, cfg.lambda, cfg.p), x_minus_q, z_minus_ax};
    diag.samples.push_back(sample);
    if (on_sample) on_sample(sample);
  };

  if (s.n == 0) {
    op.forward(s.x, ax);
    record(max_abs_diff(s.x, s.q), max_abs_diff(s.z, ax));
  }

  while (s.n < cap) {
    const double r1 = penalty(cfg.r1_0, s.n);
    const double r2 = penalty(cfg.r2_0, s.n);

    update_x(op, s.q, s.z, s.lam1, s.lam2, r1, r2, s.x);
    hard_threshold_q(s.x, s.lam1, r1, cfg.lambda, s.q);

    op.forward(s.x, ax);
    const double inv_r2 = 1.0 / r2;
    for (std::size_t i = 0; i < n_meas; ++i) w[i] = ax[i] - s.lam2[i] * inv_r2;
    update_z(w, bv, r2, cfg.p, s.z);

    double x_minus_q = 0.0;
    double z_minus_ax = 0.0;
    double guard = 0.0;
    for (std::size_t i = 0; i < n_sig; ++i) {
      const Complex d = s.x[i] - s.q[i];
      s.lam1[i] += r1 * d;
      x_minus_q = std::max(x_minus_q, std::norm(d));
      guard += std::norm(s.lam1[i]);
    }
    for (std::size_t i = 0; i < n_meas; ++i) {
      const Complex d = s.z[i] - ax[i];
      s.lam2[i] += r2 * d;
      z_minus_ax = std::max(z_minus_ax, std::norm(d));
      guard += std::norm(s.lam2[i]);
    }
    // Any NaN/Inf in x, q, z or the multipliers propagates into guard.
    guard += x_minus_q + z_minus_ax;

    ++s.n;
    s.r1 = penalty(cfg.r1_0, s.n);
    s.r2 = penalty(cfg.r2_0, s.n);

    if (!std::isfinite(guard)) {
      throw DivergedError(s.n, std::move(snapshot));
    }

    const bool done = s.r1 >= cfg.r_max || s.n >= cap;
    if (s.n % cfg.sample_every == 0 || done) {
      record(std::sqrt(x_minus_q), std::sqrt(z_minus_ax));
      snapshot = s;
    }
    if (done) break;
  }

  diag.iterations = s.n;
  diag.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ComplexSignal estimate(s.q);
  return {std::move(estimate), std::move(s), std::move(diag)};
}

}  // namespace sparse_pr
