#include <doctest.h>

#include "rezeta/error.hpp"
#include "rezeta/real.hpp"

using namespace rezeta;

TEST_CASE("precision context conversion and validation") {
  CHECK(PrecisionContext::from_digits(100).bits == 397);
  CHECK(PrecisionContext::from_digits(1).bits == 68);
  CHECK(PrecisionContext(96).working_bits() == 128);
  CHECK_THROWS_AS(PrecisionContext(53), DomainError);
  CHECK_THROWS_AS(PrecisionContext(128, 4), DomainError);
}

TEST_CASE("precision scope nests and restores") {
  const long outer = working_precision();
  {
    PrecisionScope a(200);
    CHECK(Real(1).precision() == 200);
    {
      PrecisionScope b(300);
      CHECK(Real(1).precision() == 300);
    }
    CHECK(working_precision() == 200);
  }
  CHECK(working_precision() == outer);
}

TEST_CASE("mixed precision arithmetic keeps the wider operand") {
  PrecisionScope s(64);
  Real narrow(1);
  Real wide = Real::with_precision(256);
  mpfr_set_ui(wide.get(), 3, MPFR_RNDN);
  const Real q = narrow / wide;
  CHECK(q.precision() == 256);
}

TEST_CASE("parse and formatting") {
  PrecisionScope s(200);
  const Real x = Real::parse("1.1923473372");
  CHECK(x.to_fixed(4) == "1.1923");
  CHECK(x.to_fixed(10) == "1.1923473372");
  CHECK(Real::parse("-2.5e-3").to_scientific(2) == "-2.5e-03");
  CHECK_THROWS_AS(Real::parse("1.2x"), DomainError);
  CHECK_THROWS_AS(Real::parse(""), DomainError);
}

TEST_CASE("elementary functions against closed forms") {
  PrecisionScope s(256);
  const Real pi = const_pi(256);
  CHECK(abs(sin(pi / Real(6)) - Real(1) / Real(2)) < 1e-70);
  CHECK(abs(exp(log(Real(7))) - Real(7)) < 1e-70);
  CHECK(abs(atan2(Real(1), Real(1)) * Real(4) - pi) < 1e-70);
  CHECK(abs(const_euler_gamma(256) - Real::parse("0.57721566490153286060651209008240243104215933593992")) < 1e-49);
}

TEST_CASE("moved-from values can be reassigned") {
  Real a(3);
  Real b(std::move(a));
  a = b;
  CHECK(a == b);
  Real c;
  c = std::move(b);
  CHECK(c.to_double() == 3.0);
}
