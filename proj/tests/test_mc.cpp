#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numbers>

#include "rezeta/error.hpp"
#include "rezeta/mc.hpp"
#include "rezeta/prime_zeta.hpp"

using namespace rezeta;
using namespace rezeta::mc;

TEST_CASE("sample_model closed forms") {
  CHECK(std::abs(sample_model(1.0, {std::numbers::pi}, {2}) - std::complex<double>(2.0 / 3.0, 0.0)) < 1e-15);
  const auto primes = primes::PrimeSieve(100000).primes();
  const std::vector<double> zeros(primes.size(), 0.0);
  const auto z = sample_model(2.0, zeros, primes);
  CHECK(z.real() == doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0).epsilon(1e-5));
  CHECK(std::abs(z.imag()) < 1e-15);
  // Series and direct logs agree across the switch-over prime.
  const auto w = sample_model(1.0, {1.0, 2.0}, {97, 101});
  const auto direct = 1.0 / ((1.0 - std::polar(1.0 / 97.0, 1.0)) * (1.0 - std::polar(1.0 / 101.0, 2.0)));
  CHECK(std::abs(w - direct) < 1e-15);
  CHECK_THROWS_AS(sample_model(1.0, {0.0}, {2, 3}), DomainError);
}

// sum_p arcsin(p^-2) < pi/2 (direct sum to 1e6 plus a tail bound), so each
// factor's argument stays small enough that Re Z > 0 always holds at sigma = 2.
TEST_CASE("negativity is impossible at sigma = 2") {
  const auto primes = primes::PrimeSieve(1000000).primes();
  double sum = 0.0;
  for (const auto p : primes) {
    sum += std::asin(std::pow(static_cast<double>(p), -2.0));
  }
  const double tail = 1.01 / 1e6;  // arcsin(x) <= 1.01 x for small x, sum_{n>N} n^-2 < 1/N
  CHECK(sum + tail < std::numbers::pi / 2.0);

  ModelConfig c;
  c.sigma = 2.0;
  c.trials = 100000;
  c.seed = 3;
  const auto s = estimate_d(c);
  CHECK(s.negative_hits == 0);
  CHECK(s.ci_lo == 0.0);
  CHECK(s.ci_hi == doctest::Approx(3.6889 / 100000.0).epsilon(1e-4));
}

TEST_CASE("moments at sigma = 1 and sigma = 3") {
  ModelConfig c;
  c.sigma = 1.0;
  c.trials = 100000;
  c.seed = 11;
  c.streams = 4;
  const auto m = moment_check(c);
  CHECK(m.pass);
  CHECK(m.abs2_pass.value_or(false));
  CHECK(m.stats.variance == doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0 - 1.0).epsilon(0.05));
  CHECK(m.stats.variance_re == doctest::Approx(m.stats.variance / 2.0).epsilon(0.05));

  c.sigma = 3.0;
  c.trials = 20000;
  const auto m3 = moment_check(c);
  CHECK(m3.mean_pass);
  CHECK_FALSE(m3.abs2_pass.has_value());
}

// E|Z|^2 for two primes by expanding over uniform phases:
// prod_p (1 - p^{-2 sigma})^{-1}; the same value by quadrature over the phases.
TEST_CASE("two-prime second moment by quadrature") {
  const double sigma = 1.0;
  const long n = 400;
  double acc = 0.0;
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      const double a = 2.0 * std::numbers::pi * (i + 0.5) / n;
      const double b = 2.0 * std::numbers::pi * (j + 0.5) / n;
      acc += std::norm(sample_model(sigma, {a, b}, {2, 3}));
    }
  }
  acc /= static_cast<double>(n * n);
  CHECK(acc == doctest::Approx(1.0 / ((1.0 - 0.25) * (1.0 - 1.0 / 9.0))).epsilon(1e-12));
}

TEST_CASE("two-prime model: Monte Carlo against grid quadrature") {
  const std::vector<std::uint32_t> two{2, 3};
  // arcsin(1/2) + arcsin(1/3) < pi/2, so Re Z < 0 is impossible here.
  CHECK(grid_probability(1.0, two, 0.0, 200) == 0.0);
  const double p = grid_probability(1.0, two, 1.0, 1000);
  ModelConfig c;
  c.sigma = 1.0;
  c.primes = two;
  c.threshold = 1.0;
  c.trials = 200000;
  c.seed = 99;
  c.streams = 3;
  const auto s = estimate_d(c);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(c.trials));
  CHECK(std::abs(s.d_hat - p) < 3.0 * se);
}

TEST_CASE("stream partitioning: chi-square over 100 seeds") {
  const std::vector<std::uint32_t> two{2, 3};
  const double p = grid_probability(1.0, two, 1.0, 1000);
  const std::uint64_t n = 4000;
  double chi2 = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    ModelConfig c;
    c.sigma = 1.0;
    c.primes = two;
    c.threshold = 1.0;
    c.trials = n;
    c.seed = seed;
    c.streams = 1 + static_cast<unsigned>(seed % 7);
    const double hits = static_cast<double>(estimate_d(c).negative_hits);
    const double expected = p * static_cast<double>(n);
    chi2 += (hits - expected) * (hits - expected) / (expected * (1.0 - p));
  }
  const boost::math::chi_squared dist(100.0);
  const double p_value = boost::math::cdf(boost::math::complement(dist, chi2));
  CHECK(p_value > 0.001);
  CHECK(p_value < 0.999);
}

TEST_CASE("reproducibility and determinism across thread counts") {
  ModelConfig c;
  c.sigma = 1.0;
  c.trials = 5000;
  c.seed = 42;
  c.streams = 4;
  const auto a = estimate_d(c);
  c.threads = 4;
  const auto b = estimate_d(c);
  CHECK(a.negative_hits == b.negative_hits);
  CHECK(a.mean == b.mean);
  CHECK(a.variance == b.variance);
  c.seed = 43;
  CHECK(estimate_d(c).mean != a.mean);
}

TEST_CASE("configuration guards and degenerate runs") {
  ModelConfig c;
  c.sigma = 1.0;
  c.prime_cutoff = 1000;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.prime_cutoff = 10000;
  c.sigma = 0.9;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.sigma = 1.5;
  c.prime_cutoff = 1000;
  CHECK_NOTHROW(c.validate());
  c.trials = 0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.trials = 1;
  const auto s = estimate_d(c);
  CHECK(s.degenerate);
  CHECK(s.variance == 0.0);
  CHECK(default_cutoff(1.0) == 100000);
  CHECK(default_cutoff(2.0) == 10000);
}

TEST_CASE("rare event intervals") {
  const auto [lo0, hi0] = rare_event_ci(0, 1000000);
  CHECK(lo0 == 0.0);
  CHECK(hi0 == doctest::Approx(3.6889e-6).epsilon(1e-4));
  const auto [lo5, hi5] = rare_event_ci(5, 1000000);
  CHECK(lo5 == doctest::Approx(1.6235e-6).epsilon(1e-3));
  CHECK(hi5 == doctest::Approx(11.668e-6).epsilon(1e-3));
  const auto [lo, hi] = rare_event_ci(5000, 10000);
  CHECK(lo == doctest::Approx(0.5 - 1.96 * 0.005).epsilon(1e-4));
  CHECK(hi == doctest::Approx(0.5 + 1.96 * 0.005).epsilon(1e-4));
}
