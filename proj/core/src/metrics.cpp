#include "sparse_pr/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sparse_pr/fft.hpp"
#include "sparse_pr/signal_io.hpp"

namespace sparse_pr {

Magnitudes add_noise(const Magnitudes& b, double snr_db, RngSpec spec) {
  const double bnorm = b.norm();
  if (bnorm == 0.0) throw std::invalid_argument("add_noise: measurements are all zero");
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
    throw std::invalid_argument("add_noise: SNR must be a finite dB value or the noiseless flag");
  }
  if (is_noiseless(snr_db)) return b;

  Rng rng(spec);
  RVector g(b.size());
  double gnorm2 = 0.0;
  for (auto& v : g) {
    v = rng.normal();
    gnorm2 += v * v;
  }
  const double sigma = bnorm / (std::sqrt(gnorm2) * std::pow(10.0, snr_db / 20.0));
  RVector out(b.vector());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += sigma * g[i];
  return Magnitudes(std::move(out));
}

double measure_snr(const Magnitudes& clean, const Magnitudes& noisy) {
  if (clean.size() != noisy.size()) throw std::invalid_argument("measure_snr: length mismatch");
  const double nnorm = noisy.norm();
  if (nnorm == 0.0) throw std::invalid_argument("measure_snr: noisy measurements are all zero");
  double plus = 0.0;
  double minus = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const double dp = clean[i] - noisy[i];
    const double dm = clean[i] + noisy[i];
    plus += dp * dp;
    minus += dm * dm;
  }
  const double best = std::sqrt(std::min(plus, minus));
  if (best == 0.0) return kNoiseless;
  return -20.0 * std::log10(best / nnorm);
}

namespace {

// ||estimate - c T(truth)||^2 with T = shift_tau o (flip ? conj-flip : id).
double aligned_error2(std::span<const Complex> est, std::span<const Complex> truth, bool flip,
                      std::size_t tau, bool allow_phase) {
  const std::size_t n = truth.size();
  auto transformed = [&](std::size_t i) {
    // (shift_tau y)_i = y_{i - tau}; conj-flip y_i = conj(x_{-i}).
    const std::size_t j = (i + n - tau) % n;
    return flip ? std::conj(truth[(n - j) % n]) : truth[j];
  };
  Complex inner{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) inner += std::conj(transformed(i)) * est[i];
  Complex c{1.0, 0.0};
  if (allow_phase && std::abs(inner) > 0.0) c = inner / std::abs(inner);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::norm(est[i] - c * transformed(i));
  return acc;
}

}  // namespace

double nmse(std::span<const Complex> estimate, std::span<const Complex> truth,
            const AlignmentPolicy& policy) {
  if (estimate.size() != truth.size()) throw std::invalid_argument("nmse: length mismatch");
  const double tnorm = norm2(truth);
  if (tnorm == 0.0) throw std::invalid_argument("nmse: ground truth is zero");
  const std::size_t n = truth.size();

  std::vector<bool> flips{false};
  if (policy.allow_conj_flip) flips.push_back(true);

  double best = std::numeric_limits<double>::infinity();
  if (!policy.allow_shift) {
    for (bool flip : flips) {
      best = std::min(best, aligned_error2(estimate, truth, flip, 0, policy.allow_global_phase));
    }
    return std::sqrt(best) / tnorm;
  }

  const double enorm = norm2(estimate);
  if (enorm == 0.0) return 1.0;

  // corr[tau] = <T_tau truth, estimate> for every shift at once:
  //   no flip: IDFT(conj(X) Xhat) / n;  flip: IDFT(X Xhat) / n.
  const UnitaryFft fft(n);
  CVector xf(n), ef(n), corr(n);
  fft.forward_raw(truth, xf);
  fft.forward_raw(estimate, ef);
  const double scale_tol = 1e-9 * tnorm * enorm;

  for (bool flip : flips) {
    for (std::size_t k = 0; k < n; ++k) corr[k] = (flip ? xf[k] : std::conj(xf[k])) * ef[k];
    fft.inverse_raw(corr, corr);
    std::vector<double> score(n);
    for (std::size_t t = 0; t < n; ++t) {
      const Complex c = corr[t] / static_cast<double>(n);
      score[t] = policy.allow_global_phase ? std::abs(c) : c.real();
    }
    const double top = *std::max_element(score.begin(), score.end());
    // Re-score every shift within round-off of the maximum exactly.
    for (std::size_t t = 0; t < n; ++t) {
      if (score[t] >= top - scale_tol) {
        best = std::min(best,
                        aligned_error2(estimate, truth, flip, t, policy.allow_global_phase));
      }
    }
  }
  return std::sqrt(best) / tnorm;
}

double recovery_probability(std::span<const TrialResult> results) {
  if (results.empty()) throw std::invalid_argument("recovery_probability: no trials");
  const auto hits = std::count_if(results.begin(), results.end(),
                                  [](const TrialResult& r) { return r.success; });
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

const std::string& trial_csv_header() {
  static const std::string header =
      "method,n,s,snr,k_masks,seed,nmse,success,iterations,wall_time_s";
  return header;
}

std::string to_csv_row(const TrialResult& r) {
  std::ostringstream os;
  os << r.method << ',' << r.n << ',' << r.s << ',' << format_double(r.snr) << ',' << r.k_masks
     << ',' << r.seed << ',' << format_double(r.nmse) << ',' << (r.success ? 1 : 0) << ','
     << r.iterations << ',' << format_double(r.wall_time_s);
  return os.str();
}

namespace {

template <typename T>
T parse_unsigned(std::string_view s, const char* field) {
  T v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument(std::string("malformed ") + field + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

TrialResult parse_trial_csv_row(std::string_view line) {
  const auto cells = split_csv_line(line);
  if (cells.size() != 10) throw std::invalid_argument("trial row: expected 10 columns");
  TrialResult r;
  r.method = std::string(cells[0]);
  r.n = parse_unsigned<std::size_t>(cells[1], "n");
  r.s = parse_unsigned<std::size_t>(cells[2], "s");
  r.snr = parse_double(cells[3]);
  r.k_masks = parse_unsigned<std::size_t>(cells[4], "k_masks");
  r.seed = parse_unsigned<std::uint64_t>(cells[5], "seed");
  r.nmse = parse_double(cells[6]);
  if (cells[7] != "0" && cells[7] != "1") throw std::invalid_argument("malformed success flag");
  r.success = cells[7] == "1";
  r.iterations = parse_unsigned<std::size_t>(cells[8], "iterations");
  r.wall_time_s = parse_double(cells[9]);
  return r;
}

}  // namespace sparse_pr
