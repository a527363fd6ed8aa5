#pragma once

// Bracketed zero finding with function values only.
//
// Every strategy keeps a pair of points at which f has opposite signs, so
// the returned interval always encloses a sign change. The hybrid strategy
// is Dekker's: a secant step through the best point and its predecessor,
// accepted only between the best point and the midpoint. Three steps
// without halving the bracket force a bisection, and once the remaining
// iteration budget only just covers pure bisection every step bisects, so
// the count never exceeds twice that of plain bisection.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "rezeta/error.hpp"
#include "rezeta/real.hpp"

namespace rezeta::rootfind {

enum class Strategy {
  bisect,
  hybrid,
  /// Caller asserts f is convex (or concave) on the bracket: chord points
  /// land on one side of the root and same-side secant extrapolations on
  /// the other, so both ends move. Falls back to bisection when they do not.
  convex,
};

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

template <class T>
struct Bracket {
  T lo;
  T hi;
  T f_lo;
  T f_hi;
  /// Set when an iterate hit f == 0 exactly; then lo == hi.
  bool exact_root = false;

  T width() const { return hi - lo; }
};

template <class T>
struct ZeroResult {
  Bracket<T> bracket;
  /// Bracket endpoint with the smaller |f|.
  T best;
  long iterations = 0;
  long evaluations = 0;
  bool converged = false;
};

template <class T>
struct Options {
  /// Called after every update with the current bracket.
  std::function<void(const Bracket<T>&)> on_step;
  /// 0 selects 2 * (ceil(log2(width / tol)) + 2).
  long max_iterations = 0;
};

namespace detail {

inline int sign_of(double x) { return (x > 0.0) - (x < 0.0); }
inline int sign_of(const Real& x) { return x.sign(); }
inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const Real& x) { return x.is_finite(); }
inline double magnitude(double x) { return std::abs(x); }
inline Real magnitude(const Real& x) { return abs(x); }
inline long log2_ratio(double num, double den) {
  return static_cast<long>(std::ceil(std::log2(num / den)));
}
inline long log2_ratio(const Real& num, const Real& den) { return (num / den).exponent2(); }

template <class T>
T half(const T& x) {
  return x / T(2);
}

template <class T>
T midpoint(const T& a, const T& b) {
  return a + half(b - a);
}

// Zero of the line through (x0, f0) and (x1, f1); not finite when f0 == f1.
template <class T>
T secant_point(const T& x0, const T& f0, const T& x1, const T& f1) {
  return x1 - f1 * (x1 - x0) / (f1 - f0);
}

template <class T>
bool strictly_inside(const T& x, const T& lo, const T& hi) {
  return is_finite(x) && lo < x && x < hi;
}

}  // namespace detail

template <class T, class F>
ZeroResult<T> find_zero(F&& f, T a, T b, T tol, Strategy strategy = Strategy::hybrid, const Options<T>& options = {}) {
  using detail::sign_of;
  if (!(tol > T(0))) {
    throw DomainError("find_zero: tolerance must be positive");
  }
  if (b < a) {
    std::swap(a, b);
  }
  if (!(a < b)) {
    throw BracketError("find_zero: empty interval");
  }
  ZeroResult<T> result;
  auto evaluate = [&](const T& x) {
    T fx = f(x);
    ++result.evaluations;
    if (!detail::is_finite(fx)) {
      throw EvaluatorError("find_zero: non-finite function value");
    }
    return fx;
  };
  T fa = evaluate(a);
  T fb = evaluate(b);
  auto finish_exact = [&](const T& x, const T& fx) {
    result.bracket = Bracket<T>{x, x, fx, fx, true};
    result.best = x;
    result.converged = true;
    return result;
  };
  if (sign_of(fa) == 0) {
    return finish_exact(a, fa);
  }
  if (sign_of(fb) == 0) {
    return finish_exact(b, fb);
  }
  if (sign_of(fa) == sign_of(fb)) {
    throw BracketError("find_zero: f(a) and f(b) have the same sign");
  }

  Bracket<T> br{a, b, fa, fb, false};
  const long bisection_count = std::max(0L, detail::log2_ratio(br.width(), tol)) + 2;
  const long max_iterations = options.max_iterations > 0 ? options.max_iterations : 2 * bisection_count;

  // Dekker's bookkeeping: `best` is the bracket end with the smaller |f|,
  // `prev` the previous value of best; the secant runs through the two.
  auto best_is_lo = [&] { return detail::magnitude(br.f_lo) <= detail::magnitude(br.f_hi); };
  T prev = best_is_lo() ? br.hi : br.lo;
  T f_prev = best_is_lo() ? br.f_hi : br.f_lo;
  // Two most recent points on each side of the root for the convex strategy.
  T pos1 = sign_of(fa) > 0 ? a : b, fpos1 = sign_of(fa) > 0 ? fa : fb;
  T neg1 = sign_of(fa) > 0 ? b : a, fneg1 = sign_of(fa) > 0 ? fb : fa;
  T pos0 = pos1, fpos0 = fpos1, neg0 = neg1, fneg0 = fneg1;
  bool have_pos_pair = false, have_neg_pair = false;
  bool chord_turn = true;
  // Steps since the bracket last shrank to half of `reference`.
  T reference = br.width();
  int stalled = 0;

  while (br.width() > tol) {
    if (result.iterations >= max_iterations) {
      break;
    }
    ++result.iterations;
    const T width = br.width();
    const bool lo_best = best_is_lo();
    const T best = lo_best ? br.lo : br.hi;
    const T f_best = lo_best ? br.f_lo : br.f_hi;
    const T mid = detail::midpoint(br.lo, br.hi);
    // Bisect once the remaining budget only just covers pure bisection, so
    // the iteration cap can never be reached unconverged.
    const long needed = std::max(0L, detail::log2_ratio(width, tol));
    const bool must_bisect = result.iterations + needed >= max_iterations || stalled >= 3;
    T x = mid;
    if (strategy != Strategy::bisect && !must_bisect) {
      T candidate = mid;
      bool ok = false;
      if (strategy == Strategy::hybrid) {
        // Accept interpolation only between best and the midpoint. A point
        // rounding onto best itself is kept; the clamp below then moves it
        // half a tolerance inwards, which crosses a root that close.
        auto between = [&](const T& v) { return lo_best ? (best <= v && v < mid) : (mid < v && v <= best); };
        if (sign_of(f_best - f_prev) != 0) {
          candidate = detail::secant_point(prev, f_prev, best, f_best);
          ok = between(candidate);
        }
        if (!ok) {
          candidate = detail::secant_point(br.lo, br.f_lo, br.hi, br.f_hi);
          ok = between(candidate);
        }
      } else {
        // Convex: alternate a chord step with a same-side extrapolation from
        // whichever side currently has two points.
        if (!chord_turn) {
          if (have_neg_pair && sign_of(fneg1 - fneg0) != 0) {
            candidate = detail::secant_point(neg0, fneg0, neg1, fneg1);
            ok = detail::strictly_inside(candidate, br.lo, br.hi);
          }
          if (!ok && have_pos_pair && sign_of(fpos1 - fpos0) != 0) {
            candidate = detail::secant_point(pos0, fpos0, pos1, fpos1);
            ok = detail::strictly_inside(candidate, br.lo, br.hi);
          }
        }
        if (!ok) {
          candidate = detail::secant_point(br.lo, br.f_lo, br.hi, br.f_hi);
          ok = detail::strictly_inside(candidate, br.lo, br.hi);
        }
        chord_turn = !chord_turn;
      }
      if (ok) {
        // Keep at least `shift` away from the ends so a one-sided approach
        // eventually steps across the root.
        const T shift = std::min<T>(detail::half(tol), width / T(4));
        const T lo_limit = br.lo + shift;
        const T hi_limit = br.hi - shift;
        if (lo_limit < hi_limit) {
          x = std::clamp<T>(candidate, lo_limit, hi_limit);
        }
      }
    }
    const T fx = evaluate(x);
    if (sign_of(fx) == 0) {
      return finish_exact(x, fx);
    }
    prev = best;
    f_prev = f_best;
    if (sign_of(fx) == sign_of(br.f_lo)) {
      br.lo = x;
      br.f_lo = fx;
    } else {
      br.hi = x;
      br.f_hi = fx;
    }
    if (sign_of(fx) > 0) {
      pos0 = std::move(pos1);
      fpos0 = std::move(fpos1);
      pos1 = x;
      fpos1 = fx;
      have_pos_pair = true;
    } else {
      neg0 = std::move(neg1);
      fneg0 = std::move(fneg1);
      neg1 = x;
      fneg1 = fx;
      have_neg_pair = true;
    }
    if (br.width() <= detail::half(reference)) {
      reference = br.width();
      stalled = 0;
    } else {
      ++stalled;
    }
    if (options.on_step) {
      options.on_step(br);
    }
  }
  result.bracket = br;
  result.best = detail::magnitude(br.f_lo) <= detail::magnitude(br.f_hi) ? br.lo : br.hi;
  result.converged = br.width() <= tol;
  return result;
}

inline std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::bisect:
      return "bisect";
    case Strategy::hybrid:
      return "hybrid";
    case Strategy::convex:
      return "convex";
  }
  return "hybrid";
}

inline Strategy strategy_from_string(const std::string& name) {
  if (name == "bisect") {
    return Strategy::bisect;
  }
  if (name == "hybrid") {
    return Strategy::hybrid;
  }
  if (name == "convex") {
    return Strategy::convex;
  }
  throw DomainError("unknown root-finding strategy '" + name + "'");
}

}  // namespace rezeta::rootfind
