#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

namespace casimir {

/// A real number stored as (sign, ln|value|).  Multipole sums reach
/// magnitudes far beyond double range (P_l^m and Bessel values at l ~ 2e4),
/// so products along the scattering pipeline are composed in log space and
/// exponentiated only at the final, physically bounded element scale.
struct LogSigned {
  double ln = -std::numeric_limits<double>::infinity();
  std::int8_t sign = 0;  // -1, 0, +1; sign == 0 iff value is exactly zero

  constexpr LogSigned() = default;
  constexpr LogSigned(double ln_magnitude, std::int8_t s)
      : ln(s == 0 ? -std::numeric_limits<double>::infinity() : ln_magnitude),
        sign(s) {}

  static LogSigned from_double(double v) {
    if (v == 0.0) return {};
    return {std::log(std::fabs(v)), static_cast<std::int8_t>(v > 0 ? 1 : -1)};
  }
  static constexpr LogSigned from_ln(double ln_magnitude) {
    return {ln_magnitude, +1};
  }
  static constexpr LogSigned zero() { return {}; }
  static constexpr LogSigned one() { return {0.0, +1}; }

  bool is_zero() const { return sign == 0; }

  /// Exponentiate back to double; underflows to 0, overflow saturates to inf.
  double to_double() const { return sign == 0 ? 0.0 : sign * std::exp(ln); }

  LogSigned operator*(const LogSigned& o) const {
    if (sign == 0 || o.sign == 0) return {};
    return {ln + o.ln, static_cast<std::int8_t>(sign * o.sign)};
  }
  LogSigned operator/(const LogSigned& o) const {
    if (sign == 0) return {};
    return {ln - o.ln, static_cast<std::int8_t>(sign * o.sign)};
  }
  LogSigned& operator*=(const LogSigned& o) { return *this = *this * o; }

  /// Signed addition via log-sum/log-diff.
  LogSigned operator+(const LogSigned& o) const {
    if (sign == 0) return o;
    if (o.sign == 0) return *this;
    const double hi = std::fmax(ln, o.ln);
    const double lo = std::fmin(ln, o.ln);
    if (sign == o.sign) return {hi + std::log1p(std::exp(lo - hi)), sign};
    if (ln == o.ln) return {};
    const double d = -std::expm1(lo - hi);  // 1 - e^{lo-hi} in (0,1]
    const std::int8_t s = (ln > o.ln) ? sign : o.sign;
    return {hi + std::log(d), s};
  }
  LogSigned operator-(const LogSigned& o) const {
    return *this + LogSigned{o.ln, static_cast<std::int8_t>(-o.sign)};
  }

  LogSigned pow(double p) const {
    if (sign == 0) return {};
    return {ln * p, sign};  // caller guarantees sign validity for fractional p
  }
  LogSigned sqrt() const { return pow(0.5); }
};

/// ln(a + b) for ln-magnitudes of two nonnegative terms.
inline double log_add(double lna, double lnb) {
  if (lna == -std::numeric_limits<double>::infinity()) return lnb;
  if (lnb == -std::numeric_limits<double>::infinity()) return lna;
  const double hi = std::fmax(lna, lnb), lo = std::fmin(lna, lnb);
  return hi + std::log1p(std::exp(lo - hi));
}

/// ln(a - b) for ln-magnitudes with a > b; returns -inf when equal.
inline double log_sub(double lna, double lnb) {
  if (lnb == -std::numeric_limits<double>::infinity()) return lna;
  if (lnb >= lna) return -std::numeric_limits<double>::infinity();
  return lna + std::log(-std::expm1(lnb - lna));
}

/// ln(sum_i exp(x_i)) of nonempty span, stable.
inline double log_sum_exp(std::span<const double> xs) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : xs) hi = std::fmax(hi, x);
  if (hi == -std::numeric_limits<double>::infinity()) return hi;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - hi);
  return hi + std::log(s);
}

/// ln(n!)
inline double ln_factorial(double n) { return std::lgamma(n + 1.0); }

/// ln((2n-1)!!) = ln((2n)! / (2^n n!)), valid for n >= 0 ((-1)!! = 1).
inline double ln_double_factorial_odd(int n) {
  if (n <= 0) return 0.0;
  return std::lgamma(2.0 * n + 1.0) - n * std::log(2.0) - std::lgamma(n + 1.0);
}

}  // namespace casimir
