#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <utility>
#include <vector>

#include "unicirc/errors.hpp"

namespace unicirc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * kPi;

// Wraps an angle to the half-open interval (-pi, pi].
inline double wrap_to_pi(double theta) {
  double w = std::remainder(theta, kTwoPi);
  if (w <= -kPi) w += kTwoPi;
  return w;
}

// A sorted tuple of eigenphases on (-pi, pi].  When `constrained` is set the
// phases satisfy sum(theta) = 0 (mod 2*pi) within 1e-9.
struct PhaseVector {
  std::vector<double> phases;  // ascending, each in (-pi, pi]
  bool constrained = false;

  std::size_t size() const { return phases.size(); }
  double operator[](std::size_t i) const { return phases[i]; }

  double phase_sum() const {
    return std::accumulate(phases.begin(), phases.end(), 0.0);
  }
};

// Normalizes raw angles into a PhaseVector: wrap, sort, validate constraint.
inline PhaseVector make_phase_vector(std::vector<double> raw,
                                     bool constrained = false) {
  for (double& p : raw) p = wrap_to_pi(p);
  std::sort(raw.begin(), raw.end());
  PhaseVector pv{std::move(raw), constrained};
  if (constrained && !pv.phases.empty()) {
    double s = wrap_to_pi(pv.phase_sum());
    if (std::abs(s) > 1e-9) {
      throw InvalidParams("constrained PhaseVector: phase sum " +
                          std::to_string(s) + " not 0 mod 2*pi");
    }
  }
  return pv;
}

}  // namespace unicirc
