#include "rezeta/mc.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include "rezeta/error.hpp"
#include "rezeta/prime_zeta.hpp"

namespace rezeta::mc {

namespace {

// Below this prime the factor log is taken directly; above it the series
// -log(1 - w) = sum w^m / m converges fast enough.
constexpr std::uint32_t kSeriesFrom = 100;

struct Factor {
  double modulus;  // p^{-sigma}
  int series_terms;
};

std::vector<Factor> make_factors(double sigma, const std::vector<std::uint32_t>& primes) {
  std::vector<Factor> out;
  out.reserve(primes.size());
  for (const std::uint32_t p : primes) {
    const double r = std::pow(static_cast<double>(p), -sigma);
    int terms = 0;
    if (p >= kSeriesFrom) {
      // Stop once the remainder r^{m+1} / (1 - r) drops below 2^-56.
      double rm = r;
      terms = 1;
      while (rm * r / (1.0 - r) > 0x1p-56) {
        rm *= r;
        ++terms;
      }
    }
    out.push_back({r, terms});
  }
  return out;
}

// -log(1 - r e^{i theta}) given (cos theta, sin theta).
std::complex<double> neg_log_factor(const Factor& f, double c, double s) {
  const std::complex<double> w(f.modulus * c, f.modulus * s);
  if (f.series_terms == 0) {
    return -std::log(1.0 - w);
  }
  // Horner form of w (1 + w/2 + w^2/3 + ...).
  std::complex<double> acc = 1.0 / f.series_terms;
  for (int m = f.series_terms - 1; m >= 1; --m) {
    acc = acc * w + 1.0 / m;
  }
  return acc * w;
}

struct Welford {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  // Chan et al. pairwise combination.
  void merge(const Welford& o) {
    if (o.n == 0) {
      return;
    }
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / total;
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }

  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

struct StreamResult {
  std::uint64_t hits = 0;
  Welford re, im, abs2;
};

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

// (cos theta, sin theta) for uniform theta without trigonometric calls: a
// uniform point of the unit disc has uniform angle phi, and the doubled
// angle 2 phi is again uniform.
void random_unit(std::mt19937_64& rng, double& c, double& s) {
  for (;;) {
    const double u = 2.0 * unit_uniform(rng) - 1.0;
    const double v = 2.0 * unit_uniform(rng) - 1.0;
    const double q = u * u + v * v;
    if (q <= 1.0 && q > 0x1p-40) {
      c = (u * u - v * v) / q;
      s = 2.0 * u * v / q;
      return;
    }
  }
}

StreamResult run_stream(const std::vector<Factor>& factors, double threshold, std::uint64_t seed, unsigned stream,
                        std::uint64_t trials) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::mt19937_64 rng(seq);
  StreamResult r;
  for (std::uint64_t k = 0; k < trials; ++k) {
    std::complex<double> log_z = 0.0;
    double c = 0.0, s = 0.0;
    for (const auto& f : factors) {
      random_unit(rng, c, s);
      log_z += neg_log_factor(f, c, s);
    }
    const double modulus = std::exp(log_z.real());
    c = std::cos(log_z.imag());
    s = std::sin(log_z.imag());
    const double re = modulus * c;
    // The sign of Re Z is that of cos(arg Z), free of cancellation.
    const bool hit = threshold == 0.0 ? c < 0.0 : re < threshold;
    r.hits += hit ? 1 : 0;
    r.re.add(re);
    r.im.add(modulus * s);
    r.abs2.add(modulus * modulus);
  }
  return r;
}

std::vector<std::uint32_t> model_primes(const ModelConfig& config) {
  if (!config.primes.empty()) {
    return config.primes;
  }
  return primes::PrimeSieve(config.prime_cutoff).primes();
}

}  // namespace

void ModelConfig::validate() const {
  if (!(sigma >= 1.0) || !std::isfinite(sigma)) {
    throw DomainError("mc: sigma must be >= 1");
  }
  if (trials < 1) {
    throw DomainError("mc: trials must be >= 1");
  }
  if (streams < 1) {
    throw DomainError("mc: streams must be >= 1");
  }
  if (primes.empty()) {
    if (prime_cutoff < 2) {
      throw DomainError("mc: prime_cutoff must be >= 2");
    }
    if (sigma <= 1.05 && prime_cutoff < 10000) {
      throw DomainError("mc: prime_cutoff must be >= 10000 when sigma <= 1.05");
    }
  } else {
    for (const std::uint32_t p : primes) {
      if (p < 2) {
        throw DomainError("mc: model primes must be >= 2");
      }
    }
  }
}

std::uint32_t default_cutoff(double sigma) { return sigma <= 1.05 ? 100000 : 10000; }

std::complex<double> sample_model(double sigma, const std::vector<double>& phases,
                                  const std::vector<std::uint32_t>& primes) {
  if (!(sigma >= 1.0)) {
    throw DomainError("sample_model: sigma must be >= 1");
  }
  if (phases.size() != primes.size()) {
    throw DomainError("sample_model: need one phase per prime");
  }
  const auto factors = make_factors(sigma, primes);
  std::complex<double> log_z = 0.0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    log_z += neg_log_factor(factors[i], std::cos(phases[i]), std::sin(phases[i]));
  }
  if (log_z.real() > 700.0) {
    throw CapacityError("sample_model: product overflows double");
  }
  return std::polar(std::exp(log_z.real()), log_z.imag());
}

std::pair<double, double> rare_event_ci(std::uint64_t hits, std::uint64_t trials) {
  if (trials == 0 || hits > trials) {
    throw DomainError("rare_event_ci: need 0 <= hits <= trials, trials > 0");
  }
  const double n = static_cast<double>(trials);
  const double k = static_cast<double>(hits);
  if (hits < 100) {
    const double lo = hits == 0 ? 0.0 : boost::math::gamma_p_inv(k, 0.025) / n;
    const double hi = boost::math::gamma_p_inv(k + 1.0, 0.975) / n;
    return {lo, std::min(1.0, hi)};
  }
  const double p = k / n;
  const double half = 1.959963984540054 * std::sqrt(p * (1.0 - p) / n);
  return {std::max(0.0, p - half), std::min(1.0, p + half)};
}

EstimatorStats estimate_d(const ModelConfig& config) {
  config.validate();
  const auto primes = model_primes(config);
  const auto factors = make_factors(config.sigma, primes);

  std::vector<StreamResult> results(config.streams);
  std::atomic<unsigned> next{0};
  auto worker = [&] {
    for (unsigned s = next.fetch_add(1); s < config.streams; s = next.fetch_add(1)) {
      const std::uint64_t share = config.trials / config.streams + (s < config.trials % config.streams ? 1 : 0);
      results[s] = run_stream(factors, config.threshold, config.seed, s, share);
    }
  };
  const unsigned threads = std::clamp(config.threads, 1u, config.streams);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) {
      pool.emplace_back(worker);
    }
    for (auto& t : pool) {
      t.join();
    }
  }

  StreamResult total;
  for (const auto& r : results) {
    total.hits += r.hits;
    total.re.merge(r.re);
    total.im.merge(r.im);
    total.abs2.merge(r.abs2);
  }
  EstimatorStats out;
  out.trials = config.trials;
  out.negative_hits = total.hits;
  out.mean = total.re.mean;
  out.variance_re = total.re.variance();
  out.variance = out.variance_re + total.im.variance();
  out.mean_abs2 = total.abs2.mean;
  out.var_abs2 = total.abs2.variance();
  out.d_hat = static_cast<double>(total.hits) / static_cast<double>(config.trials);
  std::tie(out.ci_lo, out.ci_hi) = rare_event_ci(total.hits, config.trials);
  out.ci_method = total.hits < 100 ? "poisson" : "normal";
  out.prime_count = primes.size();
  out.degenerate = config.trials == 1;
  if (config.primes.empty()) {
    const double P = static_cast<double>(config.prime_cutoff);
    out.tail_log_rms = std::sqrt(std::pow(P, 1.0 - 2.0 * config.sigma) / (2.0 * config.sigma - 1.0));
  }
  return out;
}

MomentCheck moment_check(const ModelConfig& config) {
  MomentCheck out;
  out.stats = estimate_d(config);
  const double n = static_cast<double>(out.stats.trials);
  out.mean_se = std::sqrt(out.stats.variance_re / n);
  out.abs2_se = std::sqrt(out.stats.var_abs2 / n);
  out.model_abs2 = 1.0;
  for (const std::uint32_t p : model_primes(config)) {
    out.model_abs2 /= 1.0 - std::pow(static_cast<double>(p), -2.0 * config.sigma);
  }
  out.mean_pass = std::abs(out.stats.mean - 1.0) <= 3.0 * out.mean_se;
  if (config.sigma == 1.0) {
    const double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;
    out.abs2_pass = std::abs(out.stats.mean_abs2 - zeta2) <= 3.0 * out.abs2_se;
  }
  out.pass = out.mean_pass && out.abs2_pass.value_or(true);
  return out;
}

double grid_probability(double sigma, const std::vector<std::uint32_t>& primes, double threshold,
                        long points_per_axis) {
  if (primes.empty() || primes.size() > 3) {
    throw DomainError("grid_probability: supports 1 to 3 primes");
  }
  if (points_per_axis < 1) {
    throw DomainError("grid_probability: points_per_axis must be positive");
  }
  const auto factors = make_factors(sigma, primes);
  const std::size_t k = factors.size();
  const double h = 2.0 * std::numbers::pi / static_cast<double>(points_per_axis);
  // Per-axis factor logs at the midpoints.
  std::vector<std::vector<std::complex<double>>> axis(k);
  for (std::size_t j = 0; j < k; ++j) {
    axis[j].reserve(static_cast<std::size_t>(points_per_axis));
    for (long i = 0; i < points_per_axis; ++i) {
      const double theta = (static_cast<double>(i) + 0.5) * h;
      axis[j].push_back(neg_log_factor(factors[j], std::cos(theta), std::sin(theta)));
    }
  }
  std::uint64_t inside = 0;
  std::uint64_t count = 0;
  std::vector<long> idx(k, 0);
  for (;;) {
    std::complex<double> log_z = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      log_z += axis[j][static_cast<std::size_t>(idx[j])];
    }
    const double re = std::exp(log_z.real()) * std::cos(log_z.imag());
    inside += re < threshold ? 1 : 0;
    ++count;
    std::size_t j = 0;
    while (j < k && ++idx[j] == points_per_axis) {
      idx[j] = 0;
      ++j;
    }
    if (j == k) {
      break;
    }
  }
  return static_cast<double>(inside) / static_cast<double>(count);
}

}  // namespace rezeta::mc
