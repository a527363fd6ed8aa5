#include <doctest.h>

#include "rezeta/error.hpp"
#include "rezeta/kernel.hpp"
#include "rezeta/prime_zeta.hpp"
#include "rezeta/sigma0.hpp"

using namespace rezeta;
using namespace rezeta::sigma0;

TEST_CASE("arcsin coefficients") {
  CHECK(arcsin_coeff(0) == 1);
  CHECK(arcsin_coeff(1) == mpq_class(1, 6));
  CHECK(arcsin_coeff(2) == mpq_class(3, 40));
  CHECK(arcsin_coeff(3) == mpq_class(5, 112));
  for (long k = 0; k <= 300; ++k) {
    const mpq_class c = arcsin_coeff(k);
    CHECK(c > 0);
    CHECK(c <= mpq_class(1, 2 * k + 1));
  }
  CHECK_THROWS_AS(arcsin_coeff(kMaxExactIndex + 1), CapacityError);
}

TEST_CASE("log-zeta coefficients are bounded by one") {
  CHECK(d_coeff(0) == 1);
  CHECK(d_coeff(1) == mpq_class(-1, 6));
  CHECK(logzeta_coeff(2) == mpq_class(-1, 2));
  for (long m = 1; m <= 600; ++m) {
    CAPTURE(m);
    CHECK(abs(logzeta_coeff(m)) <= 1);
  }
}

// A model with the single prime 2 at sigma = 1: the prime sum becomes
// arcsin(1/2) = pi/6 and log zeta(m sigma) becomes -log(1 - 2^-m).
TEST_CASE("coefficient identity at x = 1/2") {
  PrecisionScope s(256);
  const Real pi = const_pi(256);
  auto ell = [](long m) { return -log1p(-ldexp(Real(1), -m)); };
  Real all, odd_only;
  for (long m = 1; m <= 200; ++m) {
    const Real term = Real(logzeta_coeff(m)) * ell(m);
    all += term;
    if (m % 2 == 1) {
      odd_only += term;
    }
  }
  // Direct double series sum_k c_k sum_r mu(r)/r ell((2k+1) r).
  Real direct;
  for (long k = 0; k <= 100; ++k) {
    Real inner;
    for (long r = 1; (2 * k + 1) * r <= 400; ++r) {
      const int mu = primes::moebius(static_cast<std::uint64_t>(r));
      if (mu != 0) {
        inner += Real(mu) / Real(r) * ell((2 * k + 1) * r);
      }
    }
    direct += Real(arcsin_coeff(k)) * inner;
  }
  CHECK(abs(all - pi / Real(6)) < 1e-20);
  CHECK(abs(direct - all) < 1e-20);
  // The odd multiples alone miss the contribution of even r.
  CHECK(abs(odd_only - pi / Real(6)) > 1e-3);
}

TEST_CASE("truncation plans meet their bounds") {
  const auto a = plan_series(SeriesMethod::arcsin, 1.1, -200.0);
  CHECK(-(2.0 * a.truncation + 3.0) * 1.1 < -200.0);
  CHECK(-(2.0 * a.truncation + 1.0) * 1.1 >= -200.0);
  const auto l = plan_series(SeriesMethod::logzeta, 1.1, -200.0);
  CHECK(l.log2_tail_bound < -200.0);
}

TEST_CASE("both series agree and f is decreasing and convex") {
  const PrecisionContext ctx(160);
  PrecisionScope s(ctx.working_bits());
  const Real eps(1e-30);
  std::vector<Real> xs, fs;
  for (const char* text : {"1.05", "1.1", "1.15", "1.1923473372", "1.3", "1.5", "2"}) {
    CAPTURE(text);
    const Real x = Real::parse(text);
    const Real a = f_arcsin_series(x, eps, ctx);
    const Real b = f_logzeta_series(x, eps, ctx);
    CHECK(abs(a - b) <= eps * Real(2));
    xs.push_back(x);
    fs.push_back(b);
  }
  for (std::size_t i = 0; i + 2 < xs.size(); ++i) {
    CHECK(fs[i] > fs[i + 1]);
    const Real chord = ((xs[i + 2] - xs[i + 1]) * fs[i] + (xs[i + 1] - xs[i]) * fs[i + 2]) / (xs[i + 2] - xs[i]);
    CHECK(fs[i + 1] < chord);
  }
}

TEST_CASE("f against a direct prime sum") {
  // At sigma = 3 the direct sum over p <= 1e6 has tail below 1e-12.
  const PrecisionContext ctx(96);
  PrecisionScope s(ctx.working_bits());
  const primes::PrimeSieve sieve(1000000);
  Real direct = -const_pi(ctx.working_bits()) / Real(2);
  for (const auto p : sieve.primes()) {
    direct += asin(pow(Real(p), -3));
  }
  const Real f = f_logzeta_series(Real(3), Real(1e-20), ctx);
  CHECK(f > direct);
  CHECK(f < direct + Real(1e-12));
}

TEST_CASE("series preconditions") {
  const PrecisionContext ctx(96);
  PrecisionScope s(ctx.working_bits());
  CHECK_THROWS_AS(f_logzeta_series(Real(1.02), Real(1e-10), ctx), DomainError);
  CHECK_THROWS_AS(f_arcsin_series(Real(1.2), Real(1e-50), ctx), PrecisionError);
  CHECK_NOTHROW(f_logzeta_series(Real::parse("1.05"), Real(1e-10), ctx));
}

TEST_CASE("sigma_0 at low precision") {
  const auto r10 = solve_sigma0(10);
  CHECK(r10.value == "1.1923473372");
  CHECK(r10.correctly_rounded);
  CHECK(r10.certified);
  CHECK_FALSE(r10.widened);
  CHECK(solve_sigma0(1).value == "1.2");
  const auto convex = solve_sigma0(20, SeriesMethod::logzeta, rootfind::Strategy::convex);
  const auto bisect = solve_sigma0(20, SeriesMethod::arcsin, rootfind::Strategy::bisect);
  CHECK(convex.value == "1.19234733718619320290");
  CHECK(bisect.value == convex.value);
  CHECK(convex.evaluations < bisect.evaluations);
  CHECK_THROWS_AS(solve_sigma0(0), DomainError);
  CHECK_THROWS_AS(solve_sigma0(1001), CapacityError);
}
