#pragma once

// Minimal value-semantics wrapper over an MPFR floating point number.
//
// Precision model: a new value is created at the calling thread's working
// precision (see PrecisionScope). Binary operations produce a result at the
// larger of the operand precisions; unary functions keep the operand's.

#include <gmpxx.h>
#include <mpfr.h>

#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

namespace rezeta {

/// Binary working precision for high-precision kernel operations.
struct PrecisionContext {
  long bits = 128;
  long guard_bits = 32;

  PrecisionContext() = default;
  PrecisionContext(long bits_, long guard_bits_ = 32);

  /// bits + guard_bits; the precision values are actually computed at.
  long working_bits() const noexcept { return bits + guard_bits; }

  /// ceil(digits * log2(10)) + 64.
  static PrecisionContext from_digits(long digits);

  static constexpr long kMinBits = 64;
  static constexpr long kMinGuardBits = 10;
};

long working_precision() noexcept;

/// Sets the calling thread's working precision for the lifetime of the scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(long bits) noexcept;
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  long saved_;
};

class Real {
 public:
  Real();
  Real(double x);
  template <std::signed_integral I>
  Real(I x) : Real() {
    mpfr_set_si(v_, static_cast<long>(x), MPFR_RNDN);
  }
  template <std::unsigned_integral U>
  Real(U x) : Real() {
    mpfr_set_ui(v_, static_cast<unsigned long>(x), MPFR_RNDN);
  }
  explicit Real(const mpq_class& q);
  explicit Real(const mpz_class& z);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  /// Parses a decimal literal at the working precision; throws DomainError.
  static Real parse(std::string_view text);
  static Real with_precision(long bits);

  long precision() const noexcept { return static_cast<long>(mpfr_get_prec(v_)); }
  /// Rounds the stored value to a new precision.
  void round_to(long bits);

  mpfr_ptr get() noexcept { return v_; }
  mpfr_srcptr get() const noexcept { return v_; }

  double to_double() const noexcept { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_finite() const noexcept { return mpfr_number_p(v_) != 0; }
  bool is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }
  int sign() const noexcept { return mpfr_sgn(v_); }
  /// Binary exponent e with 0.5 <= |x| / 2^e < 1; very negative for zero.
  long exponent2() const noexcept;

  /// Fixed-point decimal with `decimals` digits after the point, rounded to nearest.
  std::string to_fixed(int decimals) const;
  /// Scientific notation with `digits` significant digits.
  std::string to_scientific(int digits) const;

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);
  Real operator-() const;

 private:
  struct Uninit {};
  explicit Real(Uninit, long bits);
  mpfr_t v_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);

int compare(const Real& a, const Real& b) noexcept;
inline bool operator==(const Real& a, const Real& b) noexcept { return mpfr_equal_p(a.get(), b.get()) != 0; }
inline bool operator<(const Real& a, const Real& b) noexcept { return mpfr_less_p(a.get(), b.get()) != 0; }
inline bool operator>(const Real& a, const Real& b) noexcept { return mpfr_greater_p(a.get(), b.get()) != 0; }
inline bool operator<=(const Real& a, const Real& b) noexcept { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
inline bool operator>=(const Real& a, const Real& b) noexcept { return mpfr_greaterequal_p(a.get(), b.get()) != 0; }
inline bool operator<(const Real& a, double b) noexcept { return mpfr_cmp_d(a.get(), b) < 0; }
inline bool operator>(const Real& a, double b) noexcept { return mpfr_cmp_d(a.get(), b) > 0; }
inline bool operator<=(const Real& a, double b) noexcept { return mpfr_cmp_d(a.get(), b) <= 0; }
inline bool operator>=(const Real& a, double b) noexcept { return mpfr_cmp_d(a.get(), b) >= 0; }

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real log1p(const Real& x);
Real log2(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
void sin_cos(const Real& x, Real& s, Real& c);
Real atan2(const Real& y, const Real& x);
Real asin(const Real& x);
Real pow(const Real& x, const Real& y);
Real pow(const Real& x, long n);
Real hypot(const Real& x, const Real& y);
/// x * 2^e exactly.
Real ldexp(const Real& x, long e);
Real floor(const Real& x);
Real min(const Real& a, const Real& b);
Real max(const Real& a, const Real& b);

Real const_pi(long bits);
Real const_euler_gamma(long bits);
Real const_log2(long bits);

}  // namespace rezeta
