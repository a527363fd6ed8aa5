#include "rezeta/prime_zeta.hpp"

#include <cmath>
#include <string>

#include "rezeta/error.hpp"
#include "rezeta/kernel.hpp"

namespace rezeta::primes {

PrimeSieve::PrimeSieve(std::uint32_t limit) : limit_(limit), composite_(static_cast<std::size_t>(limit) + 1, false) {
  if (limit < 2) {
    return;
  }
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (composite_[p]) {
      continue;
    }
    primes_.push_back(static_cast<std::uint32_t>(p));
    for (std::uint64_t m = p * p; m <= limit; m += p) {
      composite_[m] = true;
    }
  }
}

bool PrimeSieve::is_prime(std::uint32_t n) const {
  if (n > limit_) {
    throw DomainError("PrimeSieve::is_prime: " + std::to_string(n) + " beyond sieve limit");
  }
  return n >= 2 && !composite_[n];
}

MoebiusTable::MoebiusTable(std::uint32_t limit) : limit_(limit), values_(static_cast<std::size_t>(limit) + 1, 0) {
  if (limit == 0) {
    return;
  }
  values_[1] = 1;
  std::vector<std::uint32_t> primes;
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (!composite[i]) {
      primes.push_back(static_cast<std::uint32_t>(i));
      values_[i] = -1;
    }
    for (const std::uint32_t p : primes) {
      const std::uint64_t m = i * p;
      if (m > limit) {
        break;
      }
      composite[m] = true;
      if (i % p == 0) {
        values_[m] = 0;
        break;
      }
      values_[m] = static_cast<std::int8_t>(-values_[i]);
    }
  }
}

int MoebiusTable::operator()(std::uint32_t r) const {
  if (r == 0 || r > limit_) {
    throw DomainError("MoebiusTable: index " + std::to_string(r) + " outside [1, limit]");
  }
  return values_[r];
}

int moebius(std::uint64_t r) {
  if (r == 0) {
    throw DomainError("moebius: r must be positive");
  }
  int mu = 1;
  for (std::uint64_t p = 2; p * p <= r; ++p) {
    if (r % p != 0) {
      continue;
    }
    r /= p;
    if (r % p == 0) {
      return 0;
    }
    mu = -mu;
  }
  return r > 1 ? -mu : mu;
}

LogZetaCache::LogZetaCache(Real base, PrecisionContext ctx) : base_(std::move(base)), ctx_(ctx) {}

Real LogZetaCache::at(long multiple) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = values_.find(multiple); it != values_.end()) {
      return it->second;
    }
  }
  PrecisionScope scope(ctx_.working_bits());
  Real value = kernel::log_zeta(base_ * Real(multiple), ctx_);
  std::lock_guard lock(mutex_);
  return values_.emplace(multiple, std::move(value)).first->second;
}

std::size_t LogZetaCache::evaluations() const {
  std::lock_guard lock(mutex_);
  return values_.size();
}

long moebius_truncation(double sigma, double log2_budget) {
  const double log2_ratio_tail = -std::log2(1.0 - std::exp2(-sigma));
  for (long r = 1;; ++r) {
    // sum_{q>r} 3/(q 2^{q sigma}) <= 3/(r+1) * 2^{-(r+1) sigma} / (1 - 2^-sigma)
    const double log2_tail =
        std::log2(3.0 / static_cast<double>(r + 1)) - static_cast<double>(r + 1) * sigma + log2_ratio_tail;
    if (log2_tail < log2_budget) {
      return r;
    }
  }
}

namespace {

void check_eps(const Real& eps, const PrecisionContext& ctx) {
  if (!(eps > 0.0)) {
    throw DomainError("prime_zeta: eps must be positive");
  }
  PrecisionScope scope(ctx.working_bits());
  if (eps <= ldexp(Real(1), -ctx.bits + 4)) {
    throw PrecisionError("prime_zeta: eps " + eps.to_scientific(6) + " too small for " + std::to_string(ctx.bits) +
                         "-bit context");
  }
}

}  // namespace

PrimeZetaValue prime_zeta(LogZetaCache& cache, long k, const Real& eps) {
  const PrecisionContext& ctx = cache.context();
  check_eps(eps, ctx);
  PrecisionScope scope(ctx.working_bits());
  const double sigma = (cache.base() * Real(k)).to_double();
  const long terms = moebius_truncation(sigma, eps.exponent2() - 2.0);
  Real sum;
  for (long r = 1; r <= terms; ++r) {
    const int mu = moebius(static_cast<std::uint64_t>(r));
    if (mu == 0) {
      continue;
    }
    const Real term = cache.at(k * r) / Real(r);
    if (mu > 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return {sum, eps, terms};
}

PrimeZetaValue prime_zeta(const Real& sigma, const Real& eps, const PrecisionContext& ctx, double sigma_floor) {
  if (!(sigma >= sigma_floor)) {
    throw DomainError("prime_zeta: sigma " + sigma.to_scientific(12) + " below floor " + std::to_string(sigma_floor));
  }
  // log2(R) extra bits keep the R rounded terms inside the eps/2 evaluation budget.
  PrecisionContext inner(ctx.bits, ctx.guard_bits + 8);
  LogZetaCache cache(sigma, inner);
  return prime_zeta(cache, 1, eps);
}

PrimeZetaBracket prime_zeta_bruteforce(const Real& sigma, std::uint32_t prime_limit, const PrecisionContext& ctx) {
  if (prime_limit < 100) {
    throw DomainError("prime_zeta_bruteforce: prime_limit must be >= 100");
  }
  if (!(sigma > 1.0)) {
    throw DomainError("prime_zeta_bruteforce: sigma must exceed 1");
  }
  const PrimeSieve sieve(prime_limit);
  const long bits = ctx.working_bits() + 20;
  PrecisionScope scope(bits);
  Real s = sigma;
  s.round_to(bits);
  const Real neg_s = -s;
  Real lower;
  Real term;
  for (const std::uint32_t p : sieve.primes()) {
    mpfr_ui_pow(term.get(), p, neg_s.get(), MPFR_RNDN);
    lower += term;
  }
  Real tail = pow(Real(prime_limit), Real(1) - s) / (s - Real(1));
  lower.round_to(ctx.working_bits());
  tail.round_to(ctx.working_bits());
  return {lower, tail};
}

}  // namespace rezeta::primes
