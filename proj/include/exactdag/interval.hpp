#pragma once

// Hardware double interval with tight outward rounding.
//
// Every endpoint is computed in round-to-nearest and then corrected by at
// most one ulp using an error-free transformation (TwoSum, FMA residual), so
// no rounding-mode switching is needed and the result is the same as true
// directed rounding.

#include <cmath>
#include <limits>
#include <stdexcept>

namespace exactdag {

namespace detail {

inline double next_down(double x) {
  return std::nextafter(x, -std::numeric_limits<double>::infinity());
}
inline double next_up(double x) {
  return std::nextafter(x, std::numeric_limits<double>::infinity());
}

// Below this magnitude an FMA residual may itself be inexact; fall back to a
// plain one-ulp widening there.
inline constexpr double kTinyThreshold = 0x1p-960;

/// Adjusts a round-to-nearest result r given the sign of (exact - r).
inline double adjust(double r, double residual_sign, bool up) {
  if (up) return residual_sign > 0 ? next_up(r) : r;
  return residual_sign < 0 ? next_down(r) : r;
}

/// Result r overflowed or is tiny: widen blindly.
inline double widen(double r, bool up) {
  if (std::isinf(r)) {
    if (up) return r;
    return r > 0 ? std::numeric_limits<double>::max() : r;
  }
  return up ? next_up(r) : next_down(r);
}

inline double add_dir(double a, double b, bool up) {
  double s = a + b;
  if (!std::isfinite(s)) {
    if (std::isinf(s) && !up && s > 0 && std::isfinite(a) && std::isfinite(b))
      return std::numeric_limits<double>::max();
    if (std::isinf(s) && up && s < 0 && std::isfinite(a) && std::isfinite(b))
      return std::numeric_limits<double>::lowest();
    return s;
  }
  // TwoSum: err is exact.
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return adjust(s, err, up);
}

inline double mul_dir(double a, double b, bool up) {
  if (a == 0.0 || b == 0.0) return 0.0;
  double p = a * b;
  if (!std::isfinite(p)) {
    if (std::isinf(p) && std::isfinite(a) && std::isfinite(b)) {
      if (p > 0 && !up) return std::numeric_limits<double>::max();
      if (p < 0 && up) return std::numeric_limits<double>::lowest();
    }
    return p;
  }
  if (std::fabs(p) < kTinyThreshold) return widen(p, up);
  return adjust(p, std::fma(a, b, -p), up);
}

inline double div_dir(double a, double b, bool up) {
  double q = a / b;
  if (!std::isfinite(q)) {
    if (std::isinf(q) && std::isfinite(a) && b != 0.0) {
      if (q > 0 && !up) return std::numeric_limits<double>::max();
      if (q < 0 && up) return std::numeric_limits<double>::lowest();
    }
    return q;
  }
  if (q == 0.0 || std::fabs(q) < kTinyThreshold || std::fabs(a) < kTinyThreshold)
    return widen(q, up);
  // a - q*b is exact; exact quotient exceeds q iff (a - q b)/b > 0.
  double rem = std::fma(-q, b, a);
  double sign = (rem == 0.0) ? 0.0 : ((rem > 0) == (b > 0) ? 1.0 : -1.0);
  return adjust(q, sign, up);
}

inline double sqrt_dir(double a, bool up) {
  if (a <= 0.0) return 0.0;
  double r = std::sqrt(a);
  if (!std::isfinite(r)) return r;
  if (a < kTinyThreshold) return widen(r, up);
  // r*r - a exact via FMA; positive means r > sqrt(a).
  double res = std::fma(r, r, -a);
  return adjust(r, -res, up);
}

} // namespace detail

/// Closed interval [lo, hi] of doubles enclosing a real number.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(double v) { return {v, v}; }

  static Interval entire() {
    return {-std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
  }

  bool contains(double v) const { return lo <= v && v <= hi; }
  bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
  bool is_finite() const { return std::isfinite(lo) && std::isfinite(hi); }
  bool is_point() const { return lo == hi; }

  /// Width rounded upward.
  double width() const { return detail::add_dir(hi, -lo, true); }
};

inline Interval operator-(const Interval& x) { return {-x.hi, -x.lo}; }

inline Interval operator+(const Interval& a, const Interval& b) {
  return {detail::add_dir(a.lo, b.lo, false), detail::add_dir(a.hi, b.hi, true)};
}

inline Interval operator-(const Interval& a, const Interval& b) {
  return a + (-b);
}

inline Interval operator*(const Interval& a, const Interval& b) {
  if (!a.is_finite() || !b.is_finite()) {
    // 0 * inf is undefined; be conservative.
    if ((a.contains_zero() && !b.is_finite()) || (b.contains_zero() && !a.is_finite()))
      return Interval::entire();
  }
  const double c[4][2] = {{a.lo, b.lo}, {a.lo, b.hi}, {a.hi, b.lo}, {a.hi, b.hi}};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (auto& p : c) {
    lo = std::fmin(lo, detail::mul_dir(p[0], p[1], false));
    hi = std::fmax(hi, detail::mul_dir(p[0], p[1], true));
  }
  return {lo, hi};
}

/// Division by an interval containing zero yields the entire line.
inline Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) return Interval::entire();
  const double c[4][2] = {{a.lo, b.lo}, {a.lo, b.hi}, {a.hi, b.lo}, {a.hi, b.hi}};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (auto& p : c) {
    if (std::isinf(p[0]) && std::isinf(p[1])) return Interval::entire();
    lo = std::fmin(lo, detail::div_dir(p[0], p[1], false));
    hi = std::fmax(hi, detail::div_dir(p[0], p[1], true));
  }
  return {lo, hi};
}

/// Throws std::domain_error if the interval lies entirely below zero.
inline Interval sqrt(const Interval& x) {
  if (x.hi < 0.0) throw std::domain_error("sqrt of a negative interval");
  return {detail::sqrt_dir(std::fmax(x.lo, 0.0), false), detail::sqrt_dir(x.hi, true)};
}

} // namespace exactdag
