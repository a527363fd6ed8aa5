#pragma once

// Precision-parameterized evaluation of zeta(s) for Re s >= 1 by
// Euler-Maclaurin summation, plus Bernoulli numbers and constants.

#include <gmpxx.h>

#include <complex>

#include "rezeta/complex.hpp"
#include "rezeta/real.hpp"

namespace rezeta::kernel {

inline constexpr int kMaxBernoulliIndex = 4096;
inline constexpr double kMaxImaginaryPart = 1e8;

/// Exact B_n as a reduced rational (B_1 = -1/2 convention).
/// Throws DomainError for odd n > 1 and CapacityError for n > kMaxBernoulliIndex.
mpq_class bernoulli_exact(int n);

/// B_n rounded to the context's working precision; cached per (n, bits).
Real bernoulli(int n, const PrecisionContext& ctx);

/// Cutoffs for one Euler-Maclaurin evaluation: `terms` is N (the direct sum
/// runs over n < N) and `corrections` is M (Bernoulli terms B_2..B_2M).
struct EulerMaclaurinPlan {
  long terms = 0;
  int corrections = 0;
  /// log2 of the remainder bound after `corrections` terms.
  double log2_remainder = 0.0;
};

/// Smallest power-of-two multiple of the floor N0 = max(10, ceil(|t|/3)) (real
/// arguments start from 4) for which some M keeps the remainder
///   |(s)_{2M+1} B_{2M+2} / (2M+2)!| N^{-(sigma+2M+1)} / (sigma+2M+1)
/// below 2^target_log2.
EulerMaclaurinPlan plan_euler_maclaurin(double sigma, double t, double target_log2);

/// zeta(sigma) for real sigma >= 1 + 2^{-bits/2}; relative error < 2^{-bits}.
Real zeta_real(const Real& sigma, const PrecisionContext& ctx);

/// zeta(sigma) - 1, accurate in relative terms even for large sigma.
Real zeta_minus_one(const Real& sigma, const PrecisionContext& ctx);

/// log zeta(sigma) for sigma > 1, via log1p(zeta(sigma) - 1).
Real log_zeta(const Real& sigma, const PrecisionContext& ctx);

/// zeta(s) for Re s >= 1, |Im s| <= kMaxImaginaryPart, s != 1.
/// Absolute error < 2^{-bits} * max(1, |zeta(s)|).
ComplexValue zeta_complex(const ComplexValue& s, const PrecisionContext& ctx);

/// Machine-precision zeta(sigma + i t) for sigma >= 1, same cutoff rule as
/// zeta_complex. Used for dense scanning; error is a few ulps times log N.
std::complex<double> zeta_fast(double sigma, double t);

Real constant_pi(const PrecisionContext& ctx);
Real constant_gamma(const PrecisionContext& ctx);

}  // namespace rezeta::kernel
