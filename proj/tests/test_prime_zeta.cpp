#include <doctest.h>

#include <cmath>

#include "rezeta/error.hpp"
#include "rezeta/prime_zeta.hpp"

using namespace rezeta;
using namespace rezeta::primes;

TEST_CASE("prime sieve counts") {
  const PrimeSieve s(1000000);
  CHECK(s.primes().size() == 78498);
  CHECK(s.is_prime(999983));
  CHECK_FALSE(s.is_prime(1));
  CHECK_THROWS_AS(s.is_prime(1000001), DomainError);
}

TEST_CASE("moebius table agrees with trial division") {
  const MoebiusTable table(5000);
  for (std::uint32_t r = 1; r <= 5000; ++r) {
    CAPTURE(r);
    CHECK(table(r) == moebius(r));
  }
  CHECK(moebius(1) == 1);
  CHECK(moebius(30) == -1);
  CHECK(moebius(12) == 0);
  CHECK_THROWS_AS(moebius(0), DomainError);
}

TEST_CASE("moebius inversion lies inside the brute-force bracket") {
  const PrecisionContext ctx(96);
  PrecisionScope s(ctx.working_bits());
  for (int sigma : {2, 3, 4, 5}) {
    CAPTURE(sigma);
    const auto bf = prime_zeta_bruteforce(Real(sigma), 1000000, ctx);
    const auto v = prime_zeta(Real(sigma), Real(1e-25), ctx);
    CHECK(v.value > bf.lower - Real(1e-25));
    CHECK(v.value < bf.lower + bf.tail_bound + Real(1e-25));
  }
  const auto bf3 = prime_zeta_bruteforce(Real(3), 1000000, ctx);
  CHECK(bf3.tail_bound.to_double() <= 5e-13 * (1.0 + 1e-12));
}

TEST_CASE("prime zeta known value and truncation rule") {
  const PrecisionContext ctx(128);
  PrecisionScope s(ctx.working_bits());
  const auto v = prime_zeta(Real(2), Real(1e-30), ctx);
  CHECK(v.value.to_fixed(25) == "0.4522474200410654985065434");
  // The bound in the rule itself.
  const long r = moebius_truncation(2.0, -100.0);
  CHECK(std::log2(3.0 / (r + 1)) - (r + 1) * 2.0 - std::log2(1.0 - 0.25) < -100.0);
  CHECK(std::log2(3.0 / r) - r * 2.0 - std::log2(1.0 - 0.25) >= -100.0);
}

TEST_CASE("shared log zeta cache evaluates each multiple once") {
  const PrecisionContext ctx(128);
  PrecisionScope s(ctx.working_bits());
  LogZetaCache cache(Real(1.2), ctx);
  const Real eps(1e-20);
  prime_zeta(cache, 1, eps);
  const std::size_t after_first = cache.evaluations();
  prime_zeta(cache, 3, eps);
  prime_zeta(cache, 5, eps);
  // P(3s) and P(5s) reuse log zeta(3s), log zeta(15s), ... already present.
  CHECK(cache.evaluations() < after_first + 40);
  const auto direct = prime_zeta(Real(1.2) * Real(3), eps, ctx);
  CHECK(abs(prime_zeta(cache, 3, eps).value - direct.value) < 2e-20);
}

TEST_CASE("prime zeta preconditions") {
  const PrecisionContext ctx(96);
  PrecisionScope s(ctx.working_bits());
  CHECK_THROWS_AS(prime_zeta(Real(1.01), Real(1e-10), ctx), DomainError);
  CHECK_THROWS_AS(prime_zeta(Real(2), Real(0), ctx), DomainError);
  CHECK_THROWS_AS(prime_zeta(Real(2), Real(1e-60), ctx), PrecisionError);
  CHECK_THROWS_AS(prime_zeta_bruteforce(Real(2), 50, ctx), DomainError);
}
