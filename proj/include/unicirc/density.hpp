#pragma once

// Exact eigenphase densities of the unimodular circular ensembles.
//
// Two independent routes are implemented and must agree:
//
//  * closed_form_density: the explicit trigonometric polynomials for
//    beta in {1, 2, 4},
//      rho_{beta,N}(theta) = (N/2pi) [ 1 - (-1)^N A_beta(N) cos(N theta)
//                                      (+ B(N) cos(2N theta) for beta=4) ],
//    with the exceptional case rho_{1,2}(theta) = |sin theta| / 2.
//
//  * fourier_density: the Fourier series (N/2pi) sum_n c_n e^{i n N theta}
//    whose coefficients c_n are Morris integrals at (N-1, beta/2 + n,
//    beta/2 - n, beta/2) divided by the ensemble normalization C_{beta,N}.
//    This route works for every integer beta >= 1.
//
// Densities follow the total-mass convention: integral over (-pi, pi] is N.

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "unicirc/ensemble.hpp"
#include "unicirc/errors.hpp"
#include "unicirc/gamma.hpp"
#include "unicirc/morris.hpp"
#include "unicirc/phases.hpp"

namespace unicirc {

// Closed-form density rho_{beta,N}(theta) for beta in {1, 2, 4} in the
// total-mass convention.  The unimodular N = 1 ensemble is an atom at
// theta = 0 and has no density.
inline double closed_form_density(int beta, int N, double theta) {
  if (N < 1) throw InvalidParams("closed_form_density: N must be >= 1");
  if (beta != 1 && beta != 2 && beta != 4) {
    throw UnsupportedBeta("closed_form_density: closed forms exist for beta "
                          "in {1, 2, 4}; use the Fourier route otherwise");
  }
  if (N == 1) {
    throw DegenerateEnsemble(
        "closed_form_density: unimodular N = 1 is an atom at theta = 0");
  }
  const double th = wrap_to_pi(theta);
  if (beta == 1 && N == 2) {
    return std::abs(std::sin(th)) / 2.0;
  }

  const double parity = (N % 2 == 0) ? 1.0 : -1.0;  // (-1)^N
  double cosN_coef = 0.0;
  switch (beta) {
    case 2:
      cosN_coef = 2.0 / N;
      break;
    case 1:
      // sqrt(pi) (N-1)! / (2^{N-1} Gamma(N/2 + 3/2) Gamma(N/2 + 1))
      cosN_coef = std::exp(0.5 * std::log(kPi) +
                           detail::log_gamma_positive(N) -
                           (N - 1) * std::numbers::ln2 -
                           detail::log_gamma_positive(0.5 * N + 1.5) -
                           detail::log_gamma_positive(0.5 * N + 1.0));
      break;
    case 4:
      // (2N)!! / ((2N-1)!! N) = 4^N N! (N-1)! / (2N)!
      cosN_coef = std::exp(2.0 * (N * std::numbers::ln2 +
                                  detail::log_gamma_positive(N + 1.0)) -
                           detail::log_gamma_positive(2.0 * N + 1.0)) /
                  N;
      break;
  }
  double v = 1.0 - parity * cosN_coef * std::cos(N * th);
  if (beta == 4) {
    v += 2.0 / ((2.0 * N - 1.0) * N) * std::cos(2.0 * N * th);
  }
  return N / kTwoPi * v;
}

enum class Truncation {
  exact,         // all omitted coefficients are exact zeros (proven pole)
  tail_bounded,  // series cut with |c_n| below the recorded bound
};

// Fourier representation of an eigenphase density: rho(theta) =
// (N/2pi) sum_n c_n e^{i n N theta} with c_{-n} = c_n and c_0 = 1.
// `coeffs[n]` holds c_n for n = 0, 1, ....
struct FourierDensity {
  EnsembleSpec spec;
  std::vector<double> coeffs;
  Truncation truncation = Truncation::exact;
  double tail_bound = 0.0;  // bound on the first omitted |c_n|; 0 when exact

  int harmonic_stride() const { return spec.N; }
};

namespace detail {

// Once a denominator gamma of the Morris product is at a pole for harmonic
// n, increasing n lowers that argument by exactly 1 (b = beta/2 - n), so the
// doubled argument stays a nonpositive even integer: the pole is permanent
// and every higher coefficient is an exact zero.  Integer arithmetic only.
inline bool pole_persists(int beta, int n_vars, int n) {
  for (int j = 0; j < n_vars; ++j) {
    const std::int64_t doubled = static_cast<std::int64_t>(beta) * j +
                                 (beta - 2ll * n) + 2;
    if (doubled <= 0 && doubled % 2 == 0) return true;
  }
  return false;
}

}  // namespace detail

// Enumerates Fourier coefficients c_n = M_n / C_{beta,N} for n = 0, 1, ....
// Stops when a persistent denominator pole proves exact truncation, when
// |c_n| < tol for three consecutive n, or at n_max (recording |c_{n_max}| as
// the tail bound; TruncationFailure if that still exceeds 100 * tol).
inline FourierDensity fourier_coefficients(int beta, int N, double tol = 1e-12,
                                           int n_max = 8192) {
  if (beta < 1) throw InvalidParams("fourier_coefficients: beta must be >= 1");
  if (N < 1) throw InvalidParams("fourier_coefficients: N must be >= 1");
  if (N == 1) {
    throw DegenerateEnsemble(
        "fourier_coefficients: unimodular N = 1 is an atom at theta = 0");
  }
  if (!(tol > 0.0)) throw InvalidParams("fourier_coefficients: tol must be > 0");
  if (n_max < 1) throw InvalidParams("fourier_coefficients: n_max must be >= 1");

  const double norm = cbeta_norm(beta, N);
  FourierDensity fd;
  fd.spec = EnsembleSpec{beta, N, true};

  int small_run = 0;
  for (int n = 0; n <= n_max; ++n) {
    const MorrisEval ev =
        morris_integral_eval(MorrisParams::from_beta(beta, n, N - 1));
    const double c = ev.value / norm;
    fd.coeffs.push_back(c);

    if (n == 0) continue;
    if (ev.exact_zero && detail::pole_persists(beta, N - 1, n)) {
      fd.truncation = Truncation::exact;
      fd.tail_bound = 0.0;
      // Trailing proven zero carries no information.
      fd.coeffs.pop_back();
      // c_0 is analytically 1 (the n = 0 Morris value equals C_{beta,N});
      // snap away the last-ulp noise of the two gamma-product routes.
      fd.coeffs[0] = 1.0;
      return fd;
    }
    small_run = (std::abs(c) < tol) ? small_run + 1 : 0;
    if (small_run >= 3) {
      fd.truncation = Truncation::tail_bounded;
      fd.tail_bound = std::abs(c);
      fd.coeffs[0] = 1.0;
      return fd;
    }
  }

  const double bound = std::abs(fd.coeffs.back());
  if (bound > 100.0 * tol) {
    throw TruncationFailure(
        "fourier_coefficients: n_max reached with |c_n| = " +
        std::to_string(bound) + " still above 100 * tol");
  }
  fd.truncation = Truncation::tail_bounded;
  fd.tail_bound = bound;
  fd.coeffs[0] = 1.0;
  return fd;
}

// Evaluates the Fourier density at theta: (N/2pi) [c_0 + 2 sum c_n cos(nN t)],
// summed in ascending |n| with compensated summation.
inline double fourier_density(const FourierDensity& fd, double theta) {
  const double th = wrap_to_pi(theta);
  const double x = fd.spec.N * th;
  double sum = fd.coeffs.empty() ? 0.0 : fd.coeffs[0];
  double comp = 0.0;
  for (std::size_t n = 1; n < fd.coeffs.size(); ++n) {
    const double term = 2.0 * fd.coeffs[n] * std::cos(n * x);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return fd.spec.N / kTwoPi * sum;
}

// E[sum_j e^{i k theta_j}] for the unimodular ensemble: N c_{k/N} when N
// divides k, zero otherwise (harmonic orthogonality).  Valid for any integer
// beta >= 1; N = 1 (the atom at zero) gives 1 for every k.
inline double trace_power_expectation(int beta, int N, int k) {
  if (beta < 1) throw InvalidParams("trace_power_expectation: beta >= 1");
  if (N < 1) throw InvalidParams("trace_power_expectation: N >= 1");
  if (k % N != 0) return 0.0;
  const int m = std::abs(k) / N;
  const double coeff =
      morris_integral(MorrisParams::from_beta(beta, m, N - 1)) /
      cbeta_norm(beta, N);
  return N * coeff;
}

enum class Normalization {
  total,           // integral of rho over (-pi, pi] equals N
  per_eigenvalue,  // divided by N; integrates to 1
};

struct GridPoint {
  double theta = 0.0;
  double rho = 0.0;
};

// Uniform density grid on (-pi, pi]: theta_i = -pi + (i+1) * 2pi/n, so the
// seam value +pi is included and -pi is not.  Unconstrained ensembles have
// the flat density N/2pi by rotation invariance.
inline std::vector<GridPoint> density_grid(const EnsembleSpec& spec,
                                           int grid_points,
                                           Normalization norm =
                                               Normalization::total) {
  spec.validate();
  if (grid_points < 2) {
    throw InvalidParams("density_grid: need at least 2 grid points");
  }
  if (spec.unimodular && spec.N == 1) {
    throw DegenerateEnsemble(
        "density_grid: unimodular N = 1 is an atom at theta = 0");
  }

  const double scale = (norm == Normalization::per_eigenvalue)
                           ? 1.0 / spec.N
                           : 1.0;
  std::vector<GridPoint> grid(grid_points);

  const bool closed = spec.beta == 1 || spec.beta == 2 || spec.beta == 4;
  FourierDensity fd;
  if (spec.unimodular && !closed) {
    fd = fourier_coefficients(spec.beta, spec.N, 1e-10, 8192);
  }
  for (int i = 0; i < grid_points; ++i) {
    const double theta = -kPi + (i + 1) * kTwoPi / grid_points;
    double rho;
    if (!spec.unimodular) {
      rho = spec.N / kTwoPi;
    } else if (closed) {
      rho = closed_form_density(spec.beta, spec.N, theta);
    } else {
      rho = fourier_density(fd, theta);
    }
    grid[i] = GridPoint{theta, scale * rho};
  }
  return grid;
}

}  // namespace unicirc
