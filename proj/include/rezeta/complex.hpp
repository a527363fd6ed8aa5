#pragma once

#include "rezeta/real.hpp"

namespace rezeta {

/// s = re + i*im with both parts at context precision.
struct ComplexValue {
  Real re;
  Real im;

  ComplexValue() = default;
  ComplexValue(Real re_, Real im_ = Real(0)) : re(std::move(re_)), im(std::move(im_)) {}

  ComplexValue conj() const { return {re, -im}; }
  Real norm() const { return re * re + im * im; }
  Real abs() const { return hypot(re, im); }
  /// Principal argument in (-pi, pi].
  Real arg() const { return atan2(im, re); }
  bool is_finite() const { return re.is_finite() && im.is_finite(); }

  ComplexValue& operator+=(const ComplexValue& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  ComplexValue& operator-=(const ComplexValue& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
};

inline ComplexValue operator+(const ComplexValue& a, const ComplexValue& b) { return {a.re + b.re, a.im + b.im}; }
inline ComplexValue operator-(const ComplexValue& a, const ComplexValue& b) { return {a.re - b.re, a.im - b.im}; }
inline ComplexValue operator-(const ComplexValue& a) { return {-a.re, -a.im}; }
inline ComplexValue operator*(const ComplexValue& a, const ComplexValue& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline ComplexValue operator*(const ComplexValue& a, const Real& x) { return {a.re * x, a.im * x}; }
inline ComplexValue operator/(const ComplexValue& a, const ComplexValue& b) {
  const Real d = b.norm();
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

/// exp(-s log n) for a positive real log n: n^{-s}.
inline ComplexValue exp_neg_times(const ComplexValue& s, const Real& log_n) {
  const Real modulus = exp(-(s.re * log_n));
  Real sn, cs;
  sin_cos(s.im * log_n, sn, cs);
  return {modulus * cs, -(modulus * sn)};
}

}  // namespace rezeta
