#pragma once

// Prime zeta function P(sigma) = sum_p p^{-sigma} through Moebius inversion
//   P(sigma) = sum_{r>=1} mu(r)/r log zeta(r sigma),
// with a rigorous truncation rule, plus a brute-force oracle over primes.

#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

#include "rezeta/real.hpp"

namespace rezeta::primes {

/// All primes <= limit by the sieve of Eratosthenes. Immutable once built.
class PrimeSieve {
 public:
  explicit PrimeSieve(std::uint32_t limit);

  std::uint32_t limit() const noexcept { return limit_; }
  const std::vector<std::uint32_t>& primes() const noexcept { return primes_; }
  bool is_prime(std::uint32_t n) const;

 private:
  std::uint32_t limit_;
  std::vector<std::uint32_t> primes_;
  std::vector<bool> composite_;
};

/// mu(r) for 1 <= r <= limit, from a linear sieve.
class MoebiusTable {
 public:
  explicit MoebiusTable(std::uint32_t limit);

  std::uint32_t limit() const noexcept { return limit_; }
  int operator()(std::uint32_t r) const;

 private:
  std::uint32_t limit_;
  std::vector<std::int8_t> values_;
};

/// Moebius function by trial division. r = 0 is a DomainError.
int moebius(std::uint64_t r);

inline constexpr double kDefaultSigmaFloor = 1.05;

/// log zeta(m * base) for integer multiples m, each computed at most once.
/// Thread-safe; values are shared between all P(k * base) evaluations.
class LogZetaCache {
 public:
  LogZetaCache(Real base, PrecisionContext ctx);

  const Real& base() const noexcept { return base_; }
  const PrecisionContext& context() const noexcept { return ctx_; }
  Real at(long multiple);
  /// Number of distinct log zeta evaluations performed so far.
  std::size_t evaluations() const;

 private:
  Real base_;
  PrecisionContext ctx_;
  mutable std::mutex mutex_;
  std::map<long, Real> values_;
};

struct PrimeZetaValue {
  Real value;
  /// Guaranteed |value - P(sigma)| bound (the requested eps).
  Real error_bound;
  /// Number of Moebius terms used.
  long terms = 0;
};

/// Least R with sum_{r>R} 3 / (r 2^{r sigma}) < budget (bounded by a geometric tail).
long moebius_truncation(double sigma, double log2_budget);

/// P(sigma) with total error < eps. Requires sigma >= floor and eps > 2^{-bits+4}.
PrimeZetaValue prime_zeta(const Real& sigma, const Real& eps, const PrecisionContext& ctx,
                          double sigma_floor = kDefaultSigmaFloor);

/// P(k * cache.base()) using (and filling) the shared log zeta cache.
PrimeZetaValue prime_zeta(LogZetaCache& cache, long k, const Real& eps);

struct PrimeZetaBracket {
  /// sum_{p <= prime_limit} p^{-sigma}
  Real lower;
  /// prime_limit^{1-sigma} / (sigma - 1) >= sum_{p > prime_limit} p^{-sigma}
  Real tail_bound;
};

/// Oracle: P(sigma) lies in [lower, lower + tail_bound]. Requires prime_limit >= 100.
PrimeZetaBracket prime_zeta_bruteforce(const Real& sigma, std::uint32_t prime_limit, const PrecisionContext& ctx);

}  // namespace rezeta::primes
