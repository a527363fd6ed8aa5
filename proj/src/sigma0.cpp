#include "rezeta/sigma0.hpp"

#include <cmath>
#include <mutex>
#include <vector>

#include "rezeta/error.hpp"
#include "rezeta/kernel.hpp"
#include "rezeta/prime_zeta.hpp"

namespace rezeta::sigma0 {

namespace {

void check_index(long index, const char* what) {
  if (index < 0) {
    throw DomainError(std::string(what) + ": negative index");
  }
  if (index > kMaxExactIndex) {
    throw CapacityError(std::string(what) + ": index " + std::to_string(index) + " beyond exact range " +
                        std::to_string(kMaxExactIndex));
  }
}

struct DCache {
  std::mutex mutex;
  std::vector<mpq_class> values;
};

DCache& d_cache() {
  static DCache c;
  return c;
}

long ceil_log2(double x) { return x <= 1.0 ? 0 : static_cast<long>(std::ceil(std::log2(x))); }

void check_series_args(const Real& sigma, const Real& eps, const PrecisionContext& ctx) {
  if (!(sigma.to_double() >= kSigmaFloor)) {
    throw DomainError("f(sigma): sigma " + sigma.to_scientific(12) + " below floor 1.05");
  }
  if (!(eps > 0.0)) {
    throw DomainError("f(sigma): eps must be positive");
  }
  PrecisionScope scope(ctx.working_bits());
  if (eps <= ldexp(Real(1), -ctx.bits + 8)) {
    throw PrecisionError("f(sigma): eps " + eps.to_scientific(6) + " too small for " + std::to_string(ctx.bits) +
                         "-bit context");
  }
}

// log2(eps / 2) from the binary exponent, rounded down.
double log2_half_eps(const Real& eps) { return static_cast<double>(eps.exponent2()) - 2.0; }

}  // namespace

mpq_class arcsin_coeff(long k) {
  check_index(k, "arcsin_coeff");
  mpz_class central;
  mpz_bin_uiui(central.get_mpz_t(), static_cast<unsigned long>(2 * k), static_cast<unsigned long>(k));
  mpz_class denominator = 1;
  denominator <<= static_cast<mp_bitcnt_t>(2 * k);
  denominator *= 2 * k + 1;
  mpq_class c(central, denominator);
  c.canonicalize();
  return c;
}

mpq_class logzeta_coeff(long m) {
  if (m < 1) {
    throw DomainError("logzeta_coeff: m must be positive");
  }
  check_index(m, "logzeta_coeff");
  auto& cache = d_cache();
  std::lock_guard lock(cache.mutex);
  while (static_cast<long>(cache.values.size()) < m) {
    const long n = static_cast<long>(cache.values.size()) + 1;
    mpq_class sum = 0;
    for (long r = 1; r <= n; ++r) {
      if (n % r != 0 || (n / r) % 2 == 0) {
        continue;
      }
      const int mu = primes::moebius(static_cast<std::uint64_t>(r));
      if (mu == 0) {
        continue;
      }
      const long k = (n / r - 1) / 2;
      sum += arcsin_coeff(k) * mpq_class(mu, r);
    }
    sum.canonicalize();
    cache.values.push_back(sum);
  }
  return cache.values[static_cast<std::size_t>(m - 1)];
}

mpq_class d_coeff(long j) {
  check_index(j, "d_coeff");
  return logzeta_coeff(2 * j + 1);
}

std::string to_string(SeriesMethod m) { return m == SeriesMethod::arcsin ? "arcsin" : "logzeta"; }

SeriesMethod method_from_string(const std::string& name) {
  if (name == "arcsin") {
    return SeriesMethod::arcsin;
  }
  if (name == "logzeta") {
    return SeriesMethod::logzeta;
  }
  throw DomainError("unknown series method '" + name + "'");
}

SeriesPlan plan_series(SeriesMethod method, double sigma, double log2_budget) {
  SeriesPlan plan;
  plan.method = method;
  if (method == SeriesMethod::logzeta) {
    const double log2_geometric = std::log2(3.0) - std::log2(1.0 - std::exp2(-sigma));
    for (long m = 1;; ++m) {
      const double log2_tail = -static_cast<double>(m + 1) * sigma + log2_geometric;
      if (log2_tail < log2_budget) {
        plan.truncation = m;
        plan.log2_tail_bound = log2_tail;
        return plan;
      }
    }
  }
  for (long n = 0;; ++n) {
    const double log2_tail = -(2.0 * static_cast<double>(n) + 3.0) * sigma;
    if (log2_tail < log2_budget) {
      plan.truncation = n;
      plan.log2_tail_bound = log2_tail;
      return plan;
    }
  }
}

Real f_logzeta_series(const Real& sigma, const Real& eps, const PrecisionContext& ctx) {
  check_series_args(sigma, eps, ctx);
  const SeriesPlan plan = plan_series(SeriesMethod::logzeta, sigma.to_double(), log2_half_eps(eps));
  // The M rounded terms share the other half of the budget.
  const PrecisionContext inner(ctx.bits, ctx.guard_bits + ceil_log2(static_cast<double>(plan.truncation)) + 4);
  PrecisionScope scope(inner.working_bits());
  primes::LogZetaCache cache(sigma, inner);
  Real sum;
  for (long m = 1; m <= plan.truncation; ++m) {
    const mpq_class e = logzeta_coeff(m);
    if (e != 0) {
      sum += Real(e) * cache.at(m);
    }
  }
  Real result = sum - ldexp(kernel::constant_pi(inner), -1);
  result.round_to(ctx.working_bits());
  return result;
}

Real f_arcsin_series(const Real& sigma, const Real& eps, const PrecisionContext& ctx) {
  check_series_args(sigma, eps, ctx);
  const SeriesPlan plan = plan_series(SeriesMethod::arcsin, sigma.to_double(), log2_half_eps(eps));
  const long extra = ceil_log2(2.0 * static_cast<double>(plan.truncation + 1)) + 8;
  const PrecisionContext inner(ctx.bits + extra, ctx.guard_bits);
  PrecisionScope scope(inner.working_bits());
  // Each P((2k+1) sigma) gets eps / (2 (K+1)); c_k <= 1 keeps the sum within eps / 2.
  const Real term_eps = eps / Real(2 * (plan.truncation + 1));
  primes::LogZetaCache cache(sigma, inner);
  Real sum;
  for (long k = 0; k <= plan.truncation; ++k) {
    const auto p = primes::prime_zeta(cache, 2 * k + 1, term_eps);
    sum += Real(arcsin_coeff(k)) * p.value;
  }
  Real result = sum - ldexp(kernel::constant_pi(inner), -1);
  result.round_to(ctx.working_bits());
  return result;
}

Real f_series(SeriesMethod method, const Real& sigma, const Real& eps, const PrecisionContext& ctx) {
  return method == SeriesMethod::arcsin ? f_arcsin_series(sigma, eps, ctx) : f_logzeta_series(sigma, eps, ctx);
}

Sigma0Result solve_sigma0(long digits, SeriesMethod method, rootfind::Strategy strategy) {
  if (digits < 1) {
    throw DomainError("solve_sigma0: digits must be positive");
  }
  if (digits > kMaxDigits) {
    throw CapacityError("solve_sigma0: digits " + std::to_string(digits) + " exceed maximum 1000");
  }
  const PrecisionContext ctx = PrecisionContext::from_digits(digits);
  PrecisionScope scope(ctx.working_bits());
  Sigma0Result out;
  out.digits = digits;
  out.bits = ctx.bits;
  out.method = method;
  out.strategy = strategy;
  out.eps = pow(Real(10), -(digits + 10));

  auto f = [&](const Real& x) {
    ++out.evaluations;
    return f_series(method, x, out.eps, ctx);
  };

  Real lo = Real::parse("1.1");
  Real hi = Real::parse("1.2");
  if (!(f(lo) > 0.0 && f(hi) < 0.0)) {
    out.widened = true;
    lo = Real::parse("1.05");
    hi = Real::parse("1.3");
    if (!(f(lo) > 0.0 && f(hi) < 0.0)) {
      throw InternalError("solve_sigma0: f does not change sign on [1.05, 1.3]");
    }
  }

  // Tighten until both ends round to the same decimal string; each pass
  // restarts from the previous enclosure.
  Real tol = pow(Real(10), -(digits + 3));
  const Real tol_floor = pow(Real(10), -(digits + 8));
  for (;;) {
    auto zero = rootfind::find_zero(f, lo, hi, tol, strategy);
    out.iterations += zero.iterations;
    out.enclosure = zero.bracket;
    lo = zero.bracket.lo;
    hi = zero.bracket.hi;
    const std::string lo_text = lo.to_fixed(static_cast<int>(digits));
    const std::string hi_text = hi.to_fixed(static_cast<int>(digits));
    if (lo_text == hi_text || !(tol > tol_floor)) {
      out.correctly_rounded = lo_text == hi_text;
      out.value = out.correctly_rounded ? lo_text : zero.best.to_fixed(static_cast<int>(digits));
      break;
    }
    tol = tol / Real(1000);
  }
  // An endpoint with |f| <= eps does not prove its sign; push it outward
  // until the value clears the series error.
  auto& br = out.enclosure;
  if (!br.exact_root) {
    Real step = max(br.width(), tol);
    for (int i = 0; i < 64 && abs(br.f_lo) <= out.eps; ++i, step = step * Real(2)) {
      br.lo = br.lo - step;
      br.f_lo = f(br.lo);
    }
    step = max(br.width(), tol);
    for (int i = 0; i < 64 && abs(br.f_hi) <= out.eps; ++i, step = step * Real(2)) {
      br.hi = br.hi + step;
      br.f_hi = f(br.hi);
    }
    const std::string lo_text = br.lo.to_fixed(static_cast<int>(digits));
    out.correctly_rounded = lo_text == br.hi.to_fixed(static_cast<int>(digits));
  }
  out.certified = !br.exact_root && br.f_lo > out.eps && br.f_hi < -out.eps;
  return out;
}

}  // namespace rezeta::sigma0
