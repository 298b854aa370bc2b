#pragma once

// Gamma-function machinery for large signed products.
//
// Everything downstream (Morris integrals, ensemble normalizations) is a
// ratio of gamma functions whose magnitudes overflow doubles long before the
// ratios do, so values are carried as (sign, log|value|) pairs.  Gamma poles
// at nonpositive integers are first-class citizens: a pole in a denominator
// makes the whole product an exact zero, and that exactness is what produces
// the finite Fourier support of the eigenphase densities.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include "unicirc/errors.hpp"

namespace unicirc {

// A real number r = sign * exp(log_abs), able to represent huge magnitudes.
// sign == 0 encodes the two degenerate cases: an exact zero (log_abs = -inf)
// and a gamma pole (log_abs = +inf), whose reciprocal is an exact zero.
struct SignedLogValue {
  int sign = 0;
  double log_abs = -std::numeric_limits<double>::infinity();

  static SignedLogValue zero() {
    return {0, -std::numeric_limits<double>::infinity()};
  }
  static SignedLogValue pole() {
    return {0, std::numeric_limits<double>::infinity()};
  }
  static SignedLogValue from_value(double v) {
    if (v == 0.0) return zero();
    return {v > 0.0 ? 1 : -1, std::log(std::abs(v))};
  }

  bool is_zero() const { return sign == 0 && log_abs < 0.0; }
  bool is_pole() const { return sign == 0 && log_abs > 0.0; }

  // May overflow to +/-inf for very large log_abs; NaN for a pole.
  double value() const {
    if (sign == 0) {
      return is_pole() ? std::numeric_limits<double>::quiet_NaN() : 0.0;
    }
    return sign * std::exp(log_abs);
  }
};

namespace detail {

// Lanczos approximation, g = 7, 9 coefficients.  Relative error on Gamma is
// a few 1e-15 over the positive real axis, comfortably inside the 1e-13
// budget for |x| <= 50.
inline double log_gamma_positive(double x) {
  static const double kCoef[9] = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  const double z = x - 1.0;
  double sum = kCoef[0];
  for (int i = 1; i < 9; ++i) sum += kCoef[i] / (z + i);
  const double base = z + 7.5;  // z + g + 1/2
  // log(sqrt(2*pi)) = 0.91893853320467274178
  return 0.91893853320467274178 + (z + 0.5) * std::log(base) - base +
         std::log(sum);
}

}  // namespace detail

// True iff x sits at a gamma pole (a nonpositive integer).  Free reals are
// matched with tolerance 1e-9; exact half-integer inputs are decided exactly
// because they are representable.
inline bool is_gamma_pole(double x) {
  if (x > 0.5) return false;
  const double nearest = std::round(x);
  return nearest <= 0.0 && std::abs(x - nearest) <= 1e-9;
}

// Sign and log|Gamma(x)| for finite real x.  Poles are in-band values, not
// errors: callers treat 1/Gamma(pole) as exactly zero.  Negative non-integer
// arguments go through the reflection identity
//   Gamma(x) Gamma(1-x) = pi / sin(pi x).
inline SignedLogValue signed_log_gamma(double x) {
  if (!std::isfinite(x)) {
    throw InvalidParams("signed_log_gamma: argument must be finite");
  }
  if (x >= 0.5) {
    return {1, detail::log_gamma_positive(x)};
  }
  if (is_gamma_pole(x)) {
    return SignedLogValue::pole();
  }
  // sin(pi x) via exact range reduction: x = m + r with r in [-1/2, 1/2],
  // sin(pi x) = (-1)^m sin(pi r).
  const double m = std::round(x);
  const double r = x - m;
  const bool m_odd = (static_cast<std::int64_t>(m) % 2) != 0;
  const int sin_sign = (r > 0.0 ? 1 : -1) * (m_odd ? -1 : 1);
  const double log_abs_sin = std::log(std::abs(std::sin(std::numbers::pi * r)));
  // log(pi) = 1.1447298858494001741
  const double log_abs =
      1.1447298858494001741 - log_abs_sin - detail::log_gamma_positive(1.0 - x);
  return {sin_sign, log_abs};
}

// k!! with 0!! = (-1)!! = 1.  Throws std::overflow_error once the product
// leaves the 64-bit range; callers fall back to log-space expressions.
inline std::int64_t double_factorial(int k) {
  if (k < -1) {
    throw InvalidParams("double_factorial: k must be >= -1");
  }
  std::int64_t result = 1;
  for (std::int64_t v = k; v > 1; v -= 2) {
    if (result > std::numeric_limits<std::int64_t>::max() / v) {
      throw std::overflow_error("double_factorial: " + std::to_string(k) +
                                "!! exceeds 64-bit range");
    }
    result *= v;
  }
  return result;
}

}  // namespace unicirc
