#include "rezeta/real.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rezeta/error.hpp"

namespace rezeta {

namespace {

thread_local long g_working_precision = 128;

long max_prec(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }

std::string mpfr_format(const char* fmt, int digits, mpfr_srcptr v) {
  char* raw = nullptr;
  if (mpfr_asprintf(&raw, fmt, digits, v) < 0 || raw == nullptr) {
    throw InternalError("mpfr_asprintf failed");
  }
  std::string out(raw);
  mpfr_free_str(raw);
  return out;
}

}  // namespace

PrecisionContext::PrecisionContext(long bits_, long guard_bits_) : bits(bits_), guard_bits(guard_bits_) {
  if (bits < kMinBits) {
    throw DomainError("PrecisionContext: bits must be >= 64, got " + std::to_string(bits));
  }
  if (guard_bits < kMinGuardBits) {
    throw DomainError("PrecisionContext: guard_bits must be >= 10, got " + std::to_string(guard_bits));
  }
}

PrecisionContext PrecisionContext::from_digits(long digits) {
  if (digits < 1) {
    throw DomainError("digits must be positive");
  }
  const long bits = static_cast<long>(std::ceil(static_cast<double>(digits) * std::log2(10.0))) + 64;
  return PrecisionContext(bits);
}

long working_precision() noexcept { return g_working_precision; }

PrecisionScope::PrecisionScope(long bits) noexcept : saved_(g_working_precision) {
  g_working_precision = std::max<long>(bits, MPFR_PREC_MIN);
}

PrecisionScope::~PrecisionScope() { g_working_precision = saved_; }

Real::Real(Uninit, long bits) { mpfr_init2(v_, bits); }

Real::Real() : Real(Uninit{}, g_working_precision) { mpfr_set_zero(v_, 1); }

Real::Real(double x) : Real(Uninit{}, g_working_precision) { mpfr_set_d(v_, x, MPFR_RNDN); }

Real::Real(const mpq_class& q) : Real(Uninit{}, g_working_precision) { mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }

Real::Real(const mpz_class& z) : Real(Uninit{}, g_working_precision) { mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN); }

Real::Real(const Real& other) : Real(Uninit{}, other.precision()) { mpfr_set(v_, other.v_, MPFR_RNDN); }

Real::Real(Real&& other) noexcept {
  *v_ = *other.v_;
  mpfr_custom_init_set(other.v_, MPFR_NAN_KIND, 0, MPFR_PREC_MIN, nullptr);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    if (v_->_mpfr_d == nullptr) {
      mpfr_init2(v_, other.precision());
    } else if (precision() != other.precision()) {
      mpfr_set_prec(v_, other.precision());
    }
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

Real::~Real() {
  if (v_->_mpfr_d != nullptr) {
    mpfr_clear(v_);
  }
}

Real Real::parse(std::string_view text) {
  Real r;
  const std::string s(text);
  char* end = nullptr;
  if (!s.empty()) {
    mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
  }
  if (end == nullptr || end == s.c_str() || *end != '\0') {
    throw DomainError("not a decimal number: '" + s + "'");
  }
  return r;
}

Real Real::with_precision(long bits) {
  Real r(Uninit{}, bits);
  mpfr_set_zero(r.v_, 1);
  return r;
}

void Real::round_to(long bits) { mpfr_prec_round(v_, bits, MPFR_RNDN); }

long Real::exponent2() const noexcept {
  if (!mpfr_regular_p(v_)) {
    return mpfr_zero_p(v_) ? -(1L << 40) : (1L << 40);
  }
  return static_cast<long>(mpfr_get_exp(v_));
}

std::string Real::to_fixed(int decimals) const { return mpfr_format("%.*Rf", decimals, v_); }

std::string Real::to_scientific(int digits) const {
  return mpfr_format("%.*Re", std::max(0, digits - 1), v_);
}

Real& Real::operator+=(const Real& o) {
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(const Real& o) {
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(const Real& o) {
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(const Real& o) {
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real Real::operator-() const {
  Real r = with_precision(precision());
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

#define REZETA_BINARY(op, fn)                        \
  Real operator op(const Real& a, const Real& b) {   \
    Real r = Real::with_precision(max_prec(a, b));   \
    fn(r.get(), a.get(), b.get(), MPFR_RNDN);        \
    return r;                                        \
  }

REZETA_BINARY(+, mpfr_add)
REZETA_BINARY(-, mpfr_sub)
REZETA_BINARY(*, mpfr_mul)
REZETA_BINARY(/, mpfr_div)
#undef REZETA_BINARY

int compare(const Real& a, const Real& b) noexcept { return mpfr_cmp(a.get(), b.get()); }

#define REZETA_UNARY(name, fn)                          \
  Real name(const Real& x) {                            \
    Real r = Real::with_precision(x.precision());       \
    fn(r.get(), x.get(), MPFR_RNDN);                    \
    return r;                                           \
  }

REZETA_UNARY(abs, mpfr_abs)
REZETA_UNARY(sqrt, mpfr_sqrt)
REZETA_UNARY(exp, mpfr_exp)
REZETA_UNARY(log, mpfr_log)
REZETA_UNARY(log1p, mpfr_log1p)
REZETA_UNARY(log2, mpfr_log2)
REZETA_UNARY(sin, mpfr_sin)
REZETA_UNARY(cos, mpfr_cos)
REZETA_UNARY(asin, mpfr_asin)
#undef REZETA_UNARY

Real floor(const Real& x) {
  Real r = Real::with_precision(x.precision());
  mpfr_floor(r.get(), x.get());
  return r;
}

void sin_cos(const Real& x, Real& s, Real& c) { mpfr_sin_cos(s.get(), c.get(), x.get(), MPFR_RNDN); }

Real atan2(const Real& y, const Real& x) {
  Real r = Real::with_precision(max_prec(y, x));
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, const Real& y) {
  Real r = Real::with_precision(max_prec(x, y));
  mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, long n) {
  Real r = Real::with_precision(x.precision());
  mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
  return r;
}

Real hypot(const Real& x, const Real& y) {
  Real r = Real::with_precision(max_prec(x, y));
  mpfr_hypot(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

Real ldexp(const Real& x, long e) {
  Real r = Real::with_precision(x.precision());
  mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
  return r;
}

Real min(const Real& a, const Real& b) { return a <= b ? a : b; }
Real max(const Real& a, const Real& b) { return a >= b ? a : b; }

Real const_pi(long bits) {
  Real r = Real::with_precision(bits);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

Real const_euler_gamma(long bits) {
  Real r = Real::with_precision(bits);
  mpfr_const_euler(r.get(), MPFR_RNDN);
  return r;
}

Real const_log2(long bits) {
  Real r = Real::with_precision(bits);
  mpfr_const_log2(r.get(), MPFR_RNDN);
  return r;
}

}  // namespace rezeta
