#pragma once

// Random Euler product model
//   Z = prod_{p <= P} (1 - p^{-sigma} e^{i theta_p})^{-1},  theta_p uniform,
// as a surrogate for zeta(sigma + it) at a random height, and Monte Carlo
// estimates of d(sigma) = Prob(Re Z < 0).

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace rezeta::mc {

struct ModelConfig {
  double sigma = 1.0;
  std::uint32_t prime_cutoff = 10000;
  std::uint64_t trials = 1000000;
  std::uint64_t seed = 1;
  unsigned streams = 1;
  unsigned threads = 1;
  /// Count Re Z < threshold; 0 gives d(sigma).
  double threshold = 0.0;
  /// Use exactly these primes instead of all p <= prime_cutoff. Small
  /// models of this kind exist for oracle tests; the cutoff guard below
  /// does not apply to them.
  std::vector<std::uint32_t> primes;

  /// sigma >= 1, trials >= 1, streams >= 1, and prime_cutoff >= 1e4 when
  /// sigma <= 1.05 (the omitted factors matter most there).
  void validate() const;
};

/// 1e5 for sigma <= 1.05, 1e4 otherwise.
std::uint32_t default_cutoff(double sigma);

/// Z for explicit phases, one per prime, via exp(sum of -log(1 - w_p)).
std::complex<double> sample_model(double sigma, const std::vector<double>& phases,
                                  const std::vector<std::uint32_t>& primes);

struct EstimatorStats {
  std::uint64_t trials = 0;
  std::uint64_t negative_hits = 0;
  /// Sample mean of Re Z.
  double mean = 0.0;
  /// Sample variance of Z, E|Z - mean Z|^2 (the model gives zeta(2) - 1 at sigma = 1).
  double variance = 0.0;
  double variance_re = 0.0;
  /// Sample mean of |Z|^2.
  double mean_abs2 = 0.0;
  double var_abs2 = 0.0;
  double d_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  /// "poisson" (exact, hits < 100) or "normal".
  const char* ci_method = "poisson";
  /// Upper bound on the RMS size of the omitted log terms,
  /// sqrt(sum_{n > P} n^{-2 sigma}) <= sqrt(P^{1 - 2 sigma} / (2 sigma - 1)).
  double tail_log_rms = 0.0;
  std::size_t prime_count = 0;
  bool degenerate = false;
};

/// Deterministic in (seed, streams, trials): stream s draws from
/// mt19937_64 seeded by seed_seq{seed, s}; stream results merge in order.
EstimatorStats estimate_d(const ModelConfig& config);

/// 95% interval for a binomial proportion: exact Poisson limits for fewer
/// than 100 hits, normal approximation otherwise.
std::pair<double, double> rare_event_ci(std::uint64_t hits, std::uint64_t trials);

struct MomentCheck {
  EstimatorStats stats;
  double mean_se = 0.0;
  double abs2_se = 0.0;
  /// prod_{p} (1 - p^{-2 sigma})^{-1} over the model primes, the exact model value of E|Z|^2.
  double model_abs2 = 0.0;
  bool mean_pass = false;
  /// Tested only at sigma = 1, against zeta(2) = pi^2/6.
  std::optional<bool> abs2_pass;
  bool pass = false;
};

/// Mean of Re Z against 1 and, at sigma = 1, mean |Z|^2 against zeta(2),
/// each within 3 standard errors.
MomentCheck moment_check(const ModelConfig& config);

/// Prob(Re Z < threshold) for a model on the given primes by the midpoint
/// rule on a grid of points_per_axis^k phase vectors (k = primes.size() <= 3).
double grid_probability(double sigma, const std::vector<std::uint32_t>& primes, double threshold,
                        long points_per_axis);

}  // namespace rezeta::mc
