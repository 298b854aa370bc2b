#pragma once

// The Selberg integral in Morris's trigonometric form,
//
//   M(N, a, b, lambda) = (1/(2*pi)^N) * Integral over (-pi, pi]^N of
//       prod_j e^{i (a-b)/2 theta_j} |1 - e^{i theta_j}|^{a+b}
//       * |Delta_N(theta)|^{2 lambda}  d^N theta
//
//     = (-1)^{((a-b)/2) N} *
//       prod_{j=0}^{N-1} Gamma(l j+a+b+1) Gamma(l j+l+1) /
//                        [Gamma(l j+a+1) Gamma(l j+b+1) Gamma(l+1)]
//
// evaluated entirely in signed-log space.  A gamma pole in a denominator
// makes the value an exact zero; with the half-integer parameters arising
// from integer ensembles the pole test is integer arithmetic, never a
// floating comparison.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "unicirc/errors.hpp"
#include "unicirc/gamma.hpp"

namespace unicirc {

// Parameters (n_vars, a, b, lambda) of the Morris integral.  When built from
// an integer Dyson index via `from_beta`, the doubled values 2a, 2b, 2*lambda
// are carried as exact integers for pole detection.
struct MorrisParams {
  int n_vars = 0;
  double a = 0.0;
  double b = 0.0;
  double lam = 0.0;

  struct TwiceInts {
    std::int64_t a2 = 0;
    std::int64_t b2 = 0;
    std::int64_t lam2 = 0;
  };
  std::optional<TwiceInts> half_integer;  // set iff parameters are exact

  // Substitution used by the eigenphase densities: a = beta/2 + n,
  // b = beta/2 - n, lambda = beta/2, with n_vars integration variables.
  static MorrisParams from_beta(int beta, int n, int n_vars) {
    if (beta < 1) throw InvalidParams("MorrisParams: beta must be >= 1");
    if (n_vars < 0) throw InvalidParams("MorrisParams: n_vars must be >= 0");
    MorrisParams p;
    p.n_vars = n_vars;
    p.a = 0.5 * beta + n;
    p.b = 0.5 * beta - n;
    p.lam = 0.5 * beta;
    p.half_integer = TwiceInts{beta + 2ll * n, beta - 2ll * n, beta};
    return p;
  }

  void validate() const {
    if (n_vars < 0) throw InvalidParams("MorrisParams: n_vars must be >= 0");
    if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(lam))) {
      throw InvalidParams("MorrisParams: parameters must be finite");
    }
    if (!(a + b > -1.0)) {
      throw InvalidParams("MorrisParams: need a + b > -1 for convergence");
    }
    if (lam < 0.0) {
      throw InvalidParams("MorrisParams: need lambda >= 0 for convergence");
    }
  }
};

// Result of evaluating the Morris integral.  `exact_zero` reports that a
// denominator gamma sat at a pole; `pole_j` / `pole_argument` identify it.
struct MorrisEval {
  double value = 0.0;
  bool exact_zero = false;
  int pole_j = -1;
  double pole_argument = 0.0;
};

namespace detail {

// Pole test for a denominator argument lam*j + c + 1, where `twice_c` is the
// exact 2c and `lam2` the exact 2*lambda.  The doubled argument
// 2*lam*j + 2c + 2 is a pole iff it is nonpositive and even.
inline bool half_integer_pole(std::int64_t lam2, std::int64_t twice_c,
                              int j) {
  const std::int64_t doubled = lam2 * j + twice_c + 2;
  return doubled <= 0 && doubled % 2 == 0;
}

}  // namespace detail

// Full evaluation with pole diagnostics.
inline MorrisEval morris_integral_eval(const MorrisParams& p) {
  p.validate();

  // Sign prefactor (-1)^{((a-b)/2) n_vars}; only integer (a-b)/2 is in scope.
  std::int64_t n_index = 0;
  if (p.half_integer) {
    const std::int64_t diff2 = p.half_integer->a2 - p.half_integer->b2;
    if (diff2 % 4 != 0) {
      throw InvalidParams("morris_integral: (a-b)/2 must be an integer");
    }
    n_index = diff2 / 4;
  } else {
    const double half_diff = 0.5 * (p.a - p.b);
    const double nearest = std::round(half_diff);
    if (std::abs(half_diff - nearest) > 1e-9) {
      throw InvalidParams("morris_integral: (a-b)/2 must be an integer");
    }
    n_index = static_cast<std::int64_t>(nearest);
  }
  int sign = ((n_index * p.n_vars) % 2 == 0) ? 1 : -1;

  // Denominator pole scan first: any pole makes the result an exact zero.
  // Numerator arguments lam*j + a+b+1 and lam*j + lam+1 are positive under
  // the validated preconditions, so only the denominators can vanish.
  for (int j = 0; j < p.n_vars; ++j) {
    const double arg_a = p.lam * j + p.a + 1.0;
    const double arg_b = p.lam * j + p.b + 1.0;
    bool pole_a, pole_b;
    if (p.half_integer) {
      pole_a = detail::half_integer_pole(p.half_integer->lam2,
                                         p.half_integer->a2, j);
      pole_b = detail::half_integer_pole(p.half_integer->lam2,
                                         p.half_integer->b2, j);
    } else {
      pole_a = is_gamma_pole(arg_a);
      pole_b = is_gamma_pole(arg_b);
    }
    if (pole_a || pole_b) {
      MorrisEval ev;
      ev.value = 0.0;
      ev.exact_zero = true;
      ev.pole_j = j;
      ev.pole_argument = pole_a ? arg_a : arg_b;
      return ev;
    }
  }

  // Accumulate log magnitudes with compensated summation; track the sign.
  double log_sum = 0.0, comp = 0.0;
  auto add = [&](double term) {
    const double y = term - comp;
    const double t = log_sum + y;
    comp = (t - log_sum) - y;
    log_sum = t;
  };
  const SignedLogValue lg_lam1 = signed_log_gamma(p.lam + 1.0);
  for (int j = 0; j < p.n_vars; ++j) {
    const SignedLogValue num1 = signed_log_gamma(p.lam * j + p.a + p.b + 1.0);
    const SignedLogValue num2 = signed_log_gamma(p.lam * j + p.lam + 1.0);
    const SignedLogValue den1 = signed_log_gamma(p.lam * j + p.a + 1.0);
    const SignedLogValue den2 = signed_log_gamma(p.lam * j + p.b + 1.0);
    add(num1.log_abs);
    add(num2.log_abs);
    add(-den1.log_abs);
    add(-den2.log_abs);
    add(-lg_lam1.log_abs);
    sign *= num1.sign * num2.sign * den1.sign * den2.sign;
  }

  MorrisEval ev;
  ev.value = sign * std::exp(log_sum);
  return ev;
}

// RHS of the Morris/Selberg identity as a plain real number.
inline double morris_integral(const MorrisParams& p) {
  return morris_integral_eval(p).value;
}

// Normalization constant of the circular beta-ensemble joint density,
//   C_{beta,N} = Gamma(beta N / 2 + 1) / Gamma(beta / 2 + 1)^N.
inline double cbeta_norm(int beta, int N) {
  if (beta < 1 || N < 1) {
    throw InvalidParams("cbeta_norm: need beta >= 1 and N >= 1");
  }
  const double log_num = detail::log_gamma_positive(0.5 * beta * N + 1.0);
  const double log_den = N * detail::log_gamma_positive(0.5 * beta + 1.0);
  return std::exp(log_num - log_den);
}

}  // namespace unicirc
