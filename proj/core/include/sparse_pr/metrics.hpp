#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sparse_pr/rng.hpp"
#include "sparse_pr/signal.hpp"

namespace sparse_pr {

// SNR value meaning "no noise". Any snr_db >= kNoiselessSnrFloor is treated
// the same way, so the customary SNR = 1001 also means clean data.
inline constexpr double kNoiseless = std::numeric_limits<double>::infinity();
inline constexpr double kNoiselessSnrFloor = 1001.0;
inline bool is_noiseless(double snr_db) { return snr_db >= kNoiselessSnrFloor; }

// Default success threshold on aligned NMSE.
inline constexpr double kDefaultSuccessThreshold = 1e-3;

// Which trivial ambiguities NMSE is allowed to factor out.
struct AlignmentPolicy {
  bool allow_shift = true;
  bool allow_conj_flip = true;
  bool allow_global_phase = true;

  // Fourier magnitudes: circular shift, conjugate flip, global phase.
  static AlignmentPolicy fourier() { return {true, true, true}; }
  // Random masks break shift and flip symmetry.
  static AlignmentPolicy phase_only() { return {false, false, true}; }
};

// b + sigma g with g ~ N(0, I) real and sigma chosen so that
// ||sigma g|| / ||b|| = 10^(-snr_db / 20). Returns b unchanged when noiseless.
// Throws std::invalid_argument for all-zero b or non-finite finite-range SNR.
Magnitudes add_noise(const Magnitudes& b, double snr_db, RngSpec rng);

// -20 log10( min_{c = +-1} ||b - c b_noisy|| / ||b_noisy|| ); +inf when equal.
double measure_snr(const Magnitudes& clean, const Magnitudes& noisy);

// min over allowed transforms T and unit c of ||estimate - c T(truth)|| / ||truth||.
// The shift search uses FFT cross-correlation; the winning candidates are
// re-scored exactly. Throws std::invalid_argument if truth is zero or the
// lengths differ.
double nmse(std::span<const Complex> estimate, std::span<const Complex> truth,
            const AlignmentPolicy& policy);

struct TrialResult {
  std::string method;
  std::size_t n = 0;
  std::size_t s = 0;
  double snr = kNoiseless;
  std::size_t k_masks = 0;  // 0 for the plain DFT
  std::uint64_t seed = 0;
  double nmse = 0.0;
  bool success = false;
  std::size_t iterations = 0;
  double wall_time_s = 0.0;

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

// N_suc / N_trial. Throws std::invalid_argument on an empty list.
double recovery_probability(std::span<const TrialResult> results);

// "method,n,s,snr,k_masks,seed,nmse,success,iterations,wall_time_s"
const std::string& trial_csv_header();
std::string to_csv_row(const TrialResult& r);
TrialResult parse_trial_csv_row(std::string_view line);

}  // namespace sparse_pr
