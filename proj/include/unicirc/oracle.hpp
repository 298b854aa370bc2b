#pragma once

// Quadrature oracle for the unimodular eigenphase density at small N.
//
// This route knows nothing about gamma functions: it evaluates the
// constrained joint density |Delta_N|^beta directly on the surface
// sum theta = 0 and marginalizes numerically, providing an independent check
// of the closed forms.
//
//   N = 2: the constrained slice is one-dimensional, theta_2 = -theta_1, so
//          rho(theta) = 2 |2 sin theta|^beta / Z_1.
//   N = 3: trapezoid quadrature over (theta_1, theta_2) with
//          theta_3 = -theta_1 - theta_2;
//          rho(theta) = 3 * integral_t w(theta, t) dt / Z_2.
//
// Integrands are 2 pi periodic, so the uniform midpoint rule converges
// spectrally except at the |Delta| cusps of beta = 1, where it is still
// O(h^2); resolution 2048 meets the 1e-6 (N=2) / 1e-4 (N=3) targets.

#include <cmath>
#include <vector>

#include "unicirc/errors.hpp"
#include "unicirc/phases.hpp"

namespace unicirc {

// |Delta_N(theta)|^beta computed stably in log space,
// |Delta| = prod_{j<k} 2 |sin((theta_j - theta_k)/2)|.
// Returns exactly 0 on phase coincidence.
inline double vandermonde_abs_pow(const std::vector<double>& phases, int beta) {
  if (beta < 1) throw InvalidParams("vandermonde_abs_pow: beta must be >= 1");
  double log_sum = 0.0;
  for (std::size_t j = 0; j + 1 < phases.size(); ++j) {
    for (std::size_t k = j + 1; k < phases.size(); ++k) {
      const double s = std::abs(2.0 * std::sin(0.5 * (phases[j] - phases[k])));
      if (s == 0.0) return 0.0;
      log_sum += std::log(s);
    }
  }
  return std::exp(beta * log_sum);
}

// Precomputes the normalization once so a whole grid of density evaluations
// is cheap.
class QuadratureOracle {
 public:
  QuadratureOracle(int beta, int N, int resolution = 2048)
      : beta_(beta), n_(N), resolution_(resolution) {
    if (beta < 1) throw InvalidParams("QuadratureOracle: beta must be >= 1");
    if (resolution < 16) {
      throw InvalidParams("QuadratureOracle: resolution must be >= 16");
    }
    if (N != 2 && N != 3) {
      throw UnsupportedN("QuadratureOracle: N must be 2 or 3 (cost, not theory)");
    }
    if (N == 2) {
      // One-dimensional normalization; the integrand has cusps at 0 and pi
      // for odd beta, so the constant gets 4x the nodes of the marginals.
      const int r = 4 * resolution;
      const double h = kTwoPi / r;
      double z = 0.0;
      for (int i = 0; i < r; ++i) {
        const double t = -kPi + (i + 0.5) * h;
        z += slice2(t);
      }
      norm_ = z * h;
    } else {
      const double h = kTwoPi / resolution;
      double z = 0.0;
      for (int i = 0; i < resolution; ++i) {
        const double t = -kPi + (i + 0.5) * h;
        z += marginal3(t);
      }
      norm_ = z * h;
    }
  }

  // Density of a single observed eigenphase, total-mass convention
  // (integrates to N over (-pi, pi]).
  double density(double theta) const {
    const double th = wrap_to_pi(theta);
    if (n_ == 2) {
      return 2.0 * slice2(th) / norm_;
    }
    return 3.0 * marginal3(th) / norm_;
  }

 private:
  // Constrained joint weight on the slice theta_2 = -theta_1.
  double slice2(double theta) const {
    return vandermonde_abs_pow({theta, -theta}, beta_);
  }

  // integral over t of |Delta_3(theta, t, -theta-t)|^beta (midpoint rule).
  double marginal3(double theta) const {
    const double h = kTwoPi / resolution_;
    double acc = 0.0;
    for (int i = 0; i < resolution_; ++i) {
      const double t = -kPi + (i + 0.5) * h;
      acc += vandermonde_abs_pow({theta, t, -theta - t}, beta_);
    }
    return acc * h;
  }

  int beta_;
  int n_;
  int resolution_;
  double norm_ = 1.0;
};

// One-off evaluation of the constrained 1-point density by quadrature.
inline double oracle_density_quadrature(int beta, int N, double theta,
                                        int resolution = 2048) {
  return QuadratureOracle(beta, N, resolution).density(theta);
}

}  // namespace unicirc
