#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparse_pr/operators.hpp"
#include "sparse_pr/rng.hpp"
#include "sparse_pr/signal.hpp"

namespace sparse_pr {

// Parameters of the L0-regularized ADMM with geometric penalty growth.
struct SolverConfig {
  double lambda = 1e-3;
  int p = 1;  // fidelity exponent, 1 or 2
  double r1_0 = 1e-2;
  double r2_0 = 1e-2;
  double rho = 1.0005;
  double r_max = 100.0;
  // Hard cap on iterations. Required when rho == 1; otherwise defaults to
  // termination_count() + 1.
  std::optional<std::size_t> max_iters;
  RngSpec rng;
  // Diagnostics are recorded for the initial state, every sample_every
  // iterations and at the end.
  std::size_t sample_every = 10;

  // Defaults for the L2-fidelity variant (L0L2PR).
  static SolverConfig l0l2pr();
  // Defaults for the L1-fidelity variant (L0L1PR).
  static SolverConfig l0l1pr();

  // Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

// Iterations until r1 reaches r_max: ceil(ln(r_max / r1_0) / ln rho), or
// std::nullopt when rho == 1 (the schedule never stops by itself).
std::optional<std::size_t> termination_count(const SolverConfig& cfg);

struct SolverState {
  CVector x, q, z;
  CVector lam1, lam2;
  double r1 = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

struct KktResiduals {
  double x_minus_q = 0.0;       // ||x - q||_inf
  double z_minus_ax = 0.0;      // ||z - A x||_inf
  double lam1_minus_adj = 0.0;  // ||lam1 - A* lam2||_inf
};

struct IterationSample {
  std::size_t iteration = 0;  // iterations completed
  double energy = 0.0;
  double x_minus_q = 0.0;   // ||x - q||_inf
  double z_minus_ax = 0.0;  // ||z - A x||_inf
};

struct Diagnostics {
  std::vector<IterationSample> samples;
  std::size_t iterations = 0;
  double wall_time_s = 0.0;

  std::vector<double> energy_trace() const;
  std::string to_json() const;
};

struct SolveResult {
  ComplexSignal estimate;  // final q: exactly sparse
  SolverState state;
  Diagnostics diagnostics;
};

// Raised when an iterate turns non-finite. Carries the last finite state.
class DivergedError : public std::runtime_error {
 public:
  DivergedError(std::size_t iteration, SolverState last_finite);
  std::size_t iteration() const { return iteration_; }
  const SolverState& last_finite_state() const { return last_finite_; }

 private:
  std::size_t iteration_;
  SolverState last_finite_;
};

using SampleCallback = std::function<void(const IterationSample&)>;

// q0, z0 i.i.d. standard complex Gaussian from cfg.rng; x0 = lam1 = lam2 = 0;
// penalties at their initial values.
SolverState initialize(const SolverConfig& cfg, const MeasurementOperator& op);

// E(q, z) = lambda ||q||_0 + (1/p) || b - |z| ||_p^p.
double energy(std::span<const Complex> q, std::span<const Complex> z, std::span<const double> b,
              double lambda, int p);

KktResiduals kkt_residuals(const SolverState& state, const MeasurementOperator& op);

// Runs the ADMM loop: x-update, q hard threshold, z magnitude fit on
// W = A x - lam2 / r2, multiplier ascent, then r <- rho r. Stops once
// r1 >= r_max or the iteration cap is hit. The estimate is the final q.
//
// Throws std::invalid_argument on a bad config or size mismatch, and
// DivergedError if an iterate becomes non-finite.
SolveResult admm_solve(const MeasurementOperator& op, const Magnitudes& b,
                       const SolverConfig& cfg, const SampleCallback& on_sample = {});

// Continues from an explicit state (used by tests and for warm starts).
SolveResult admm_solve_from(const MeasurementOperator& op, const Magnitudes& b,
                            const SolverConfig& cfg, SolverState state,
                            const SampleCallback& on_sample = {});

}  // namespace sparse_pr
