#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "rezeta/error.hpp"
#include "rezeta/kernel.hpp"

namespace rezeta::kernel {

namespace {

constexpr int kMaxCorrections = kMaxBernoulliIndex / 2 - 1;
// Above this many terms the multiplicative power table is not worth its memory.
constexpr long kMaxTabulatedTerms = 1L << 22;
constexpr long kMinTabulatedTerms = 2048;

// B_2k / (2k)! for k = 1..m at a given precision, shared across calls.
class CorrectionTable {
 public:
  std::shared_ptr<const std::vector<Real>> get(long bits, int m) {
    std::lock_guard lock(mutex_);
    auto& slot = tables_[bits];
    if (!slot || static_cast<int>(slot->size()) < m + 1) {
      const int target = std::max(m, 16);
      auto fresh = std::make_shared<std::vector<Real>>();
      PrecisionScope scope(bits);
      fresh->reserve(static_cast<std::size_t>(target) + 1);
      fresh->emplace_back(0);
      mpz_class factorial = 1;
      for (int k = 1; k <= target; ++k) {
        factorial *= (2 * k - 1) * (2 * k);
        fresh->emplace_back(mpq_class(bernoulli_exact(2 * k) / factorial));
      }
      slot = std::move(fresh);
    }
    return slot;
  }

 private:
  std::mutex mutex_;
  std::map<long, std::shared_ptr<const std::vector<Real>>> tables_;
};

CorrectionTable& correction_table() {
  static CorrectionTable t;
  return t;
}

const std::vector<double>& correction_table_double() {
  static const std::vector<double> table = [] {
    std::vector<double> out{0.0};
    mpz_class factorial = 1;
    for (int k = 1; k <= 150; ++k) {
      factorial *= (2 * k - 1) * (2 * k);
      const mpq_class q = bernoulli_exact(2 * k) / factorial;
      out.push_back(q.get_d());
    }
    return out;
  }();
  return table;
}

long ceil_log2(double x) { return x <= 1.0 ? 0 : static_cast<long>(std::ceil(std::log2(x))); }

// Extra bits so that N summands and phases t*log n of size up to |t| log N
// keep the final absolute error below 2^-working_bits.
long summation_bits(long working_bits, long terms, double abs_t) {
  return working_bits + ceil_log2(static_cast<double>(terms)) +
         ceil_log2(1.0 + abs_t * std::log(static_cast<double>(terms) + 1.0)) + 8;
}

void check_real_argument(const Real& sigma, const PrecisionContext& ctx) {
  if (!sigma.is_finite()) {
    throw DomainError("zeta: non-finite argument");
  }
  PrecisionScope scope(ctx.working_bits());
  const Real guard = ldexp(Real(1), -ctx.bits / 2);
  if (abs(sigma - Real(1)) < guard) {
    throw PoleError("zeta: argument at the pole s = 1", sigma.to_scientific(20));
  }
  if (sigma < 1.0) {
    throw DomainError("zeta: real argument " + sigma.to_scientific(20) + " below 1 is not supported");
  }
}

// Sum_{n=2}^{N-1} n^{-sigma} (real) at the current working precision.
Real real_power_sum(const Real& sigma, long terms) {
  Real sum;
  Real term;
  Real log_n;
  for (long n = 2; n < terms; ++n) {
    mpfr_log_ui(log_n.get(), static_cast<unsigned long>(n), MPFR_RNDN);
    mpfr_mul(term.get(), log_n.get(), sigma.get(), MPFR_RNDN);
    mpfr_neg(term.get(), term.get(), MPFR_RNDN);
    mpfr_exp(term.get(), term.get(), MPFR_RNDN);
    sum += term;
  }
  return sum;
}

// n^{-s} directly: exp(-sigma log n) * (cos(t log n) - i sin(t log n)).
void complex_power(ComplexValue& out, const ComplexValue& s, bool unit_sigma, unsigned long n, Real& log_n,
                   Real& scratch) {
  mpfr_log_ui(log_n.get(), n, MPFR_RNDN);
  mpfr_mul(scratch.get(), s.im.get(), log_n.get(), MPFR_RNDN);
  mpfr_sin_cos(out.im.get(), out.re.get(), scratch.get(), MPFR_RNDN);
  if (unit_sigma) {
    mpfr_div_ui(out.re.get(), out.re.get(), n, MPFR_RNDN);
    mpfr_div_ui(out.im.get(), out.im.get(), n, MPFR_RNDN);
  } else {
    mpfr_mul(scratch.get(), s.re.get(), log_n.get(), MPFR_RNDN);
    mpfr_neg(scratch.get(), scratch.get(), MPFR_RNDN);
    mpfr_exp(scratch.get(), scratch.get(), MPFR_RNDN);
    mpfr_mul(out.re.get(), out.re.get(), scratch.get(), MPFR_RNDN);
    mpfr_mul(out.im.get(), out.im.get(), scratch.get(), MPFR_RNDN);
  }
  mpfr_neg(out.im.get(), out.im.get(), MPFR_RNDN);
}

void complex_mul_into(ComplexValue& out, const ComplexValue& a, const ComplexValue& b) {
  mpfr_fmms(out.re.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_fmma(out.im.get(), a.re.get(), b.im.get(), a.im.get(), b.re.get(), MPFR_RNDN);
}

// Sum_{n=1}^{N-1} n^{-s}. n^{-s} is completely multiplicative, so for large N
// only primes need transcendental functions; composites reuse the stored
// values of their smallest prime factor and cofactor (both <= n/2).
ComplexValue complex_power_sum(const ComplexValue& s, long terms) {
  const bool unit_sigma = mpfr_cmp_ui(s.re.get(), 1) == 0;
  ComplexValue sum(Real(1), Real(0));
  ComplexValue term;
  Real log_n;
  Real scratch;
  if (terms < kMinTabulatedTerms || terms > kMaxTabulatedTerms) {
    for (long n = 2; n < terms; ++n) {
      complex_power(term, s, unit_sigma, static_cast<unsigned long>(n), log_n, scratch);
      sum += term;
    }
    return sum;
  }
  const long last = terms - 1;
  const long half = last / 2;
  std::vector<std::uint32_t> smallest_factor(static_cast<std::size_t>(last) + 1, 0);
  for (long p = 2; p * p <= last; ++p) {
    if (smallest_factor[p] == 0) {
      for (long m = p * p; m <= last; m += p) {
        if (smallest_factor[m] == 0) {
          smallest_factor[m] = static_cast<std::uint32_t>(p);
        }
      }
    }
  }
  std::vector<ComplexValue> table(static_cast<std::size_t>(half) + 1);
  for (long n = 2; n <= last; ++n) {
    const std::uint32_t p = smallest_factor[n];
    if (p == 0) {
      complex_power(term, s, unit_sigma, static_cast<unsigned long>(n), log_n, scratch);
    } else {
      complex_mul_into(term, table[p], table[n / p]);
    }
    sum += term;
    if (n <= half) {
      table[n] = term;
    }
  }
  return sum;
}

// N/(s-1) + 1/2 + sum_k B_2k/(2k)! (s)_{2k-1} N^{-(2k-1)}, to be multiplied by N^{-s}.
ComplexValue complex_tail_bracket(const ComplexValue& s, long terms, int corrections, long bits) {
  const Real n(terms);
  const ComplexValue s_minus_one(s.re - Real(1), s.im);
  ComplexValue bracket = ComplexValue(n) / s_minus_one;
  bracket.re += Real(0.5);
  if (corrections > 0) {
    const auto table = correction_table().get(bits, corrections);
    const Real inv_n2 = Real(1) / (n * n);
    ComplexValue w(s.re / n, s.im / n);
    for (int k = 1; k <= corrections; ++k) {
      bracket += w * (*table)[static_cast<std::size_t>(k)];
      const ComplexValue a(s.re + Real(2 * k - 1), s.im);
      const ComplexValue b(s.re + Real(2 * k), s.im);
      w = (w * a) * b;
      w = w * inv_n2;
    }
  }
  return bracket;
}

Real real_tail_bracket(const Real& sigma, long terms, int corrections, long bits) {
  const Real n(terms);
  Real bracket = n / (sigma - Real(1)) + Real(0.5);
  if (corrections > 0) {
    const auto table = correction_table().get(bits, corrections);
    const Real inv_n2 = Real(1) / (n * n);
    Real w = sigma / n;
    for (int k = 1; k <= corrections; ++k) {
      bracket += w * (*table)[static_cast<std::size_t>(k)];
      w *= (sigma + Real(2 * k - 1)) * (sigma + Real(2 * k)) * inv_n2;
    }
  }
  return bracket;
}

}  // namespace

EulerMaclaurinPlan plan_euler_maclaurin(double sigma, double t, double target_log2) {
  const double abs_t = std::abs(t);
  const double log2_two_pi = std::log2(2.0 * std::numbers::pi);
  const double log2_zeta2 = std::log2(std::numbers::pi * std::numbers::pi / 6.0);
  const long floor_terms =
      abs_t == 0.0 ? 4 : std::max<long>(10, static_cast<long>(std::ceil(abs_t / 3.0)));
  auto log2_abs_shift = [&](double j) { return 0.5 * std::log2((sigma + j) * (sigma + j) + abs_t * abs_t); };

  for (long terms = floor_terms;; terms *= 2) {
    if (terms > (1L << 40)) {
      throw CapacityError("Euler-Maclaurin plan: no admissible cutoff for the requested accuracy");
    }
    const double log2_n = std::log2(static_cast<double>(terms));
    // |(s)_{2M+2}|, starting with M = 0: |s||s+1|.
    double log2_pochhammer = log2_abs_shift(0.0) + log2_abs_shift(1.0);
    double previous = std::numeric_limits<double>::infinity();
    for (int m = 0; m <= kMaxCorrections; ++m) {
      const double two_m = 2.0 * m;
      // |B_{2M+2}|/(2M+2)! = 2 zeta(2M+2) / (2 pi)^{2M+2} <= 2 zeta(2) / (2 pi)^{2M+2}.
      const double log2_coeff = 1.0 + log2_zeta2 - (two_m + 2.0) * log2_two_pi;
      const double log2_rem = log2_pochhammer + log2_coeff - (sigma + two_m + 1.0) * log2_n -
                              std::log2(sigma + two_m + 1.0);
      if (log2_rem < target_log2) {
        return {terms, m, log2_rem};
      }
      if (log2_rem > previous) {
        break;
      }
      previous = log2_rem;
      log2_pochhammer += log2_abs_shift(two_m + 2.0) + log2_abs_shift(two_m + 3.0);
    }
  }
}

Real zeta_minus_one(const Real& sigma, const PrecisionContext& ctx) {
  check_real_argument(sigma, ctx);
  const double sigma_d = sigma.to_double();
  const long target_bits = ctx.working_bits() + 2;
  // zeta(sigma) - 1 > 2^-sigma, so an absolute target of 2^-(bits+sigma) is relative 2^-bits.
  const auto plan = plan_euler_maclaurin(sigma_d, 0.0, -static_cast<double>(target_bits) - sigma_d);
  const long bits = summation_bits(ctx.working_bits(), plan.terms, 0.0);
  PrecisionScope scope(bits);
  Real s = sigma;
  s.round_to(bits);
  const Real n(plan.terms);
  Real tail = exp(-(s * log(n))) * real_tail_bracket(s, plan.terms, plan.corrections, bits);
  Real result = real_power_sum(s, plan.terms) + tail;
  result.round_to(ctx.working_bits());
  return result;
}

Real zeta_real(const Real& sigma, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx.working_bits());
  Real z = zeta_minus_one(sigma, ctx) + Real(1);
  return z;
}

Real log_zeta(const Real& sigma, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx.working_bits());
  return log1p(zeta_minus_one(sigma, ctx));
}

ComplexValue zeta_complex(const ComplexValue& s, const PrecisionContext& ctx) {
  if (!s.is_finite()) {
    throw DomainError("zeta: non-finite argument");
  }
  if (s.re < 1.0) {
    throw DomainError("zeta: Re s = " + s.re.to_scientific(20) + " below 1 is not supported");
  }
  const double abs_t = std::abs(s.im.to_double());
  if (abs_t > kMaxImaginaryPart) {
    throw CapacityError("zeta: |Im s| = " + s.im.to_scientific(12) + " exceeds maximum 1e8");
  }
  {
    PrecisionScope scope(ctx.working_bits());
    const Real dist = hypot(s.re - Real(1), s.im);
    if (dist < ldexp(Real(1), -ctx.bits / 2)) {
      throw PoleError("zeta: argument at the pole s = 1",
                      s.re.to_scientific(20) + (s.im.sign() < 0 ? "" : "+") + s.im.to_scientific(20) + "i");
    }
  }
  const double sigma_d = s.re.to_double();
  const long target_bits = ctx.working_bits() + 2;
  const auto plan = plan_euler_maclaurin(sigma_d, abs_t, -static_cast<double>(target_bits));
  const long bits = summation_bits(ctx.working_bits(), plan.terms, abs_t);
  PrecisionScope scope(bits);
  ComplexValue z(s.re, s.im);
  z.re.round_to(bits);
  z.im.round_to(bits);
  Real log_n = log(Real(plan.terms));
  const ComplexValue n_pow = exp_neg_times(z, log_n);
  ComplexValue result = complex_power_sum(z, plan.terms) +
                        n_pow * complex_tail_bracket(z, plan.terms, plan.corrections, bits);
  result.re.round_to(ctx.working_bits());
  result.im.round_to(ctx.working_bits());
  return result;
}

std::complex<double> zeta_fast(double sigma, double t) {
  if (!std::isfinite(sigma) || !std::isfinite(t)) {
    throw DomainError("zeta_fast: non-finite argument");
  }
  if (sigma < 1.0) {
    throw DomainError("zeta_fast: Re s below 1 is not supported");
  }
  const double abs_t = std::abs(t);
  if (abs_t > kMaxImaginaryPart) {
    throw CapacityError("zeta_fast: |Im s| exceeds maximum 1e8");
  }
  if (std::hypot(sigma - 1.0, t) < 0x1p-26) {
    throw PoleError("zeta_fast: argument at the pole s = 1", std::to_string(sigma) + "+" + std::to_string(t) + "i");
  }
  const auto plan = plan_euler_maclaurin(sigma, abs_t, -56.0);
  const auto& table = correction_table_double();
  if (plan.corrections >= static_cast<int>(table.size())) {
    throw CapacityError("zeta_fast: correction count exceeds double table");
  }
  const bool unit_sigma = sigma == 1.0;
  // Neumaier-compensated sums of the real and imaginary parts.
  double sum_re = 1.0, comp_re = 0.0, sum_im = 0.0, comp_im = 0.0;
  auto add = [](double& sum, double& comp, double x) {
    const double next = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - next) + x : (x - next) + sum;
    sum = next;
  };
  for (long n = 2; n < plan.terms; ++n) {
    const double log_n = std::log(static_cast<double>(n));
    const double modulus = unit_sigma ? 1.0 / static_cast<double>(n) : std::exp(-sigma * log_n);
    const double phase = t * log_n;
    add(sum_re, comp_re, modulus * std::cos(phase));
    add(sum_im, comp_im, -modulus * std::sin(phase));
  }
  const std::complex<double> s(sigma, t);
  const double n = static_cast<double>(plan.terms);
  std::complex<double> bracket = n / (s - 1.0) + 0.5;
  std::complex<double> w = s / n;
  for (int k = 1; k <= plan.corrections; ++k) {
    bracket += table[static_cast<std::size_t>(k)] * w;
    w *= (s + static_cast<double>(2 * k - 1)) * (s + static_cast<double>(2 * k)) / (n * n);
  }
  const double log_n = std::log(n);
  const std::complex<double> n_pow = std::polar(std::exp(-sigma * log_n), -t * log_n);
  return std::complex<double>(sum_re + comp_re, sum_im + comp_im) + n_pow * bracket;
}

Real constant_pi(const PrecisionContext& ctx) { return const_pi(ctx.working_bits()); }

Real constant_gamma(const PrecisionContext& ctx) { return const_euler_gamma(ctx.working_bits()); }

}  // namespace rezeta::kernel
