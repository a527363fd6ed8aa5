#pragma once

// The abscissa sigma_0 > 1 beyond which Re zeta(sigma + it) > 0 for all t,
// characterised as the unique root of
//   f(sigma) = sum_p arcsin(p^{-sigma}) - pi/2.
//
// f is evaluated through two rearrangements of the double series
//   arcsin x = sum_k c_k x^{2k+1},  c_k = (2k)! / ((2^k k!)^2 (2k+1)):
//   f = sum_k c_k P((2k+1) sigma) - pi/2                       (arcsin series)
//   f = sum_{m>=1} e_m log zeta(m sigma) - pi/2                (log-zeta series)
// with e_m = sum_{(2k+1) r = m} c_k mu(r) / r. Substituting the Moebius
// inversion of P into the arcsin series produces every multiple m, even ones
// included (r runs over all integers), so the odd-only sum with d_j = e_{2j+1}
// alone does not reproduce f. |e_m| <= (odd divisors of m) / m <= 1.
// Both truncations carry rigorous tail bounds, so the two routes cross-check
// each other.

#include <gmpxx.h>

#include <string>

#include "rezeta/real.hpp"
#include "rezeta/rootfind.hpp"

namespace rezeta::sigma0 {

/// Exact coefficients are available up to this index.
inline constexpr long kMaxExactIndex = 10000;
inline constexpr long kMaxDigits = 1000;
inline constexpr double kSigmaFloor = 1.05;

/// c_k, exact. Throws CapacityError beyond kMaxExactIndex.
mpq_class arcsin_coeff(long k);

/// e_m for m >= 1, exact, by enumerating divisor pairs of m. Cached.
mpq_class logzeta_coeff(long m);

/// d_j = e_{2j+1}.
mpq_class d_coeff(long j);

enum class SeriesMethod { arcsin, logzeta };

std::string to_string(SeriesMethod m);
SeriesMethod method_from_string(const std::string& name);

struct SeriesPlan {
  SeriesMethod method = SeriesMethod::logzeta;
  /// K for the arcsin series, the last multiple M for the log-zeta series.
  long truncation = 0;
  /// log2 of the bound on the neglected tail (< log2(eps / 2)).
  double log2_tail_bound = 0.0;
};

/// Least truncation index whose tail bound is below eps / 2:
///   arcsin:  2^{-(2K+3) sigma}
///   logzeta: sum_{m>M} 3 / 2^{m sigma} <= 3 2^{-(M+1) sigma} / (1 - 2^{-sigma})
SeriesPlan plan_series(SeriesMethod method, double sigma, double log2_eps);

/// f(sigma) with |error| < eps. Requires sigma >= 1.05 and eps > 2^{-bits+8}.
Real f_arcsin_series(const Real& sigma, const Real& eps, const PrecisionContext& ctx);
Real f_logzeta_series(const Real& sigma, const Real& eps, const PrecisionContext& ctx);
Real f_series(SeriesMethod method, const Real& sigma, const Real& eps, const PrecisionContext& ctx);

struct Sigma0Result {
  rootfind::Bracket<Real> enclosure;
  /// sigma_0 rounded to `digits` decimals.
  std::string value;
  long digits = 0;
  long bits = 0;
  Real eps;
  long evaluations = 0;
  long iterations = 0;
  /// Both enclosure endpoints round to `value`.
  bool correctly_rounded = false;
  /// |f| exceeds the series error bound at both endpoints, so the sign change is proven.
  bool certified = false;
  SeriesMethod method = SeriesMethod::logzeta;
  rootfind::Strategy strategy = rootfind::Strategy::hybrid;
  /// True when [1.1, 1.2] failed its sign check and [1.05, 1.3] was used.
  bool widened = false;
};

/// Encloses sigma_0 in an interval narrower than 10^-digits, works at
/// ceil(digits log2 10) + 64 bits with series eps = 10^-(digits+10), and
/// rounds the result to `digits` decimals.
Sigma0Result solve_sigma0(long digits, SeriesMethod method = SeriesMethod::logzeta,
                          rootfind::Strategy strategy = rootfind::Strategy::hybrid);

}  // namespace rezeta::sigma0
