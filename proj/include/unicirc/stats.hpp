#pragma once

// Goodness-of-fit statistics for eigenphase batches: histogramming over
// (-pi, pi], chi-square tests with expected masses integrated from a density,
// one- and two-sample Kolmogorov-Smirnov, and per-sample moment checks.
//
// Eigenphases within one matrix are correlated, so pooled-phase chi-square
// and KS p-values are approximate (the repulsion makes them conservative);
// moment_check averages one statistic per matrix and has exact standard
// errors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "unicirc/errors.hpp"
#include "unicirc/gamma.hpp"
#include "unicirc/phases.hpp"

namespace unicirc {

namespace detail {

// Regularized lower incomplete gamma P(a, x) by series expansion (x < a+1).
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - log_gamma_positive(a));
}

// Regularized upper incomplete gamma Q(a, x) by continued fraction (x >= a+1),
// modified Lentz iteration.
inline double gamma_q_contfrac(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - log_gamma_positive(a)) * h;
}

}  // namespace detail

// Regularized lower incomplete gamma P(a, x).
inline double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw InvalidParams("gamma_p: need a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  return (x < a + 1.0) ? detail::gamma_p_series(a, x)
                       : 1.0 - detail::gamma_q_contfrac(a, x);
}

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
inline double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw InvalidParams("gamma_q: need a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  return (x < a + 1.0) ? 1.0 - detail::gamma_p_series(a, x)
                       : detail::gamma_q_contfrac(a, x);
}

// Chi-square upper tail probability with `dof` degrees of freedom.
inline double chi_square_sf(double x, int dof) {
  if (dof < 1) throw InvalidParams("chi_square_sf: dof must be >= 1");
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * x);
}

// Kolmogorov distribution upper tail Q(lambda) = 2 sum (-1)^{k-1} e^{-2k^2 l^2}
// for large lambda; Jacobi-theta form for small lambda where that series
// converges slowly.
inline double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    const double t = std::exp(-kPi * kPi / (8.0 * lambda * lambda));
    const double cdf = std::sqrt(kTwoPi) / lambda *
                       (t + std::pow(t, 9.0) + std::pow(t, 25.0) +
                        std::pow(t, 49.0));
    return 1.0 - cdf;
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-17) break;
  }
  return 2.0 * sum;
}

// Histogram layout: `bins` uniform cells over (-pi, pi].
struct HistogramSpec {
  int bins = 64;
};

// Pools every eigenphase of every sample into bins.  The seam value +pi lands
// in the last bin.
inline std::vector<std::int64_t> histogram(const std::vector<PhaseVector>& batch,
                                           const HistogramSpec& hs = {}) {
  if (hs.bins < 1) throw InvalidParams("histogram: bins must be >= 1");
  if (batch.empty()) throw InvalidParams("histogram: batch must be nonempty");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(hs.bins), 0);
  const double width = kTwoPi / hs.bins;
  for (const PhaseVector& pv : batch) {
    for (double theta : pv.phases) {
      auto idx = static_cast<std::int64_t>((theta + kPi) / width);
      idx = std::min<std::int64_t>(std::max<std::int64_t>(idx, 0), hs.bins - 1);
      ++counts[static_cast<std::size_t>(idx)];
    }
  }
  return counts;
}

// Goodness-of-fit summary.
struct GofReport {
  double chi_square = 0.0;
  int dof = 0;
  double p_value = 0.0;
  double ks_statistic = 0.0;  // filled by the caller when KS is also run
  std::int64_t sample_count = 0;
  int bins_used = 0;
};

// Chi-square test of binned phases against a density on (-pi, pi] given in
// any overall normalization (expected masses are rescaled to the observed
// total).  Bin masses are integrated by composite trapezoid with 32
// sub-intervals per bin; adjacent bins are merged until every expected count
// is at least 5.
inline GofReport chi_square_gof(const std::vector<std::int64_t>& counts,
                                const std::function<double(double)>& density) {
  if (counts.empty()) throw InvalidParams("chi_square_gof: no bins");
  std::int64_t total = 0;
  for (std::int64_t c : counts) total += c;
  if (total < 1000) {
    throw InsufficientSamples("chi_square_gof: need at least 1000 phases, got " +
                              std::to_string(total));
  }

  const int bins = static_cast<int>(counts.size());
  const double width = kTwoPi / bins;
  std::vector<double> expected(counts.size(), 0.0);
  double expected_total = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double lo = -kPi + b * width;
    constexpr int kSub = 32;
    const double h = width / kSub;
    double acc = 0.5 * (density(lo) + density(lo + width));
    for (int s = 1; s < kSub; ++s) acc += density(lo + s * h);
    expected[static_cast<std::size_t>(b)] = acc * h;
    expected_total += expected[static_cast<std::size_t>(b)];
  }
  for (double& e : expected) e *= static_cast<double>(total) / expected_total;

  // Merge adjacent bins (left to right) until each group expects >= 5.
  std::vector<double> merged_exp;
  std::vector<std::int64_t> merged_obs;
  double acc_e = 0.0;
  std::int64_t acc_o = 0;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    acc_e += expected[b];
    acc_o += counts[b];
    if (acc_e >= 5.0) {
      merged_exp.push_back(acc_e);
      merged_obs.push_back(acc_o);
      acc_e = 0.0;
      acc_o = 0;
    }
  }
  if (acc_e > 0.0 || acc_o > 0) {
    if (!merged_exp.empty()) {
      merged_exp.back() += acc_e;
      merged_obs.back() += acc_o;
    } else {
      merged_exp.push_back(acc_e);
      merged_obs.push_back(acc_o);
    }
  }
  if (merged_exp.size() < 2) {
    throw InsufficientSamples("chi_square_gof: fewer than 2 usable bins");
  }

  double stat = 0.0;
  for (std::size_t b = 0; b < merged_exp.size(); ++b) {
    const double diff = static_cast<double>(merged_obs[b]) - merged_exp[b];
    stat += diff * diff / merged_exp[b];
  }
  GofReport report;
  report.chi_square = stat;
  report.dof = static_cast<int>(merged_exp.size()) - 1;
  report.p_value = chi_square_sf(stat, report.dof);
  report.sample_count = total;
  report.bins_used = static_cast<int>(merged_exp.size());
  return report;
}

// Cumulative distribution of a density on (-pi, pi], tabulated by cumulative
// trapezoid on a uniform grid and normalized to end at 1; evaluation is
// linear interpolation.
class TabulatedCdf {
 public:
  explicit TabulatedCdf(const std::function<double(double)>& density,
                        int grid = 4096)
      : values_(static_cast<std::size_t>(grid) + 1, 0.0) {
    if (grid < 2) throw InvalidParams("TabulatedCdf: grid must be >= 2");
    const double h = kTwoPi / grid;
    double prev = density(-kPi);
    for (int i = 1; i <= grid; ++i) {
      const double cur = density(-kPi + i * h);
      values_[static_cast<std::size_t>(i)] =
          values_[static_cast<std::size_t>(i - 1)] + 0.5 * (prev + cur) * h;
      prev = cur;
    }
    const double total = values_.back();
    if (!(total > 0.0)) throw InvalidParams("TabulatedCdf: density mass <= 0");
    for (double& v : values_) v /= total;
  }

  double operator()(double theta) const {
    const double th = wrap_to_pi(theta);
    const int grid = static_cast<int>(values_.size()) - 1;
    const double pos = (th + kPi) / kTwoPi * grid;
    const int i = std::clamp(static_cast<int>(pos), 0, grid - 1);
    const double frac = pos - i;
    return values_[static_cast<std::size_t>(i)] * (1.0 - frac) +
           values_[static_cast<std::size_t>(i + 1)] * frac;
  }

 private:
  std::vector<double> values_;
};

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

// One-sample Kolmogorov-Smirnov test of sorted phases against a CDF, with
// the asymptotic Kolmogorov p-value.  Pooled eigenphases within one matrix
// are dependent, so this is a diagnostic rather than an exact test.
inline KsResult ks_test(const std::vector<double>& sorted_phases,
                        const std::function<double(double)>& cdf) {
  if (sorted_phases.empty()) throw InvalidParams("ks_test: empty sample");
  const auto n = static_cast<double>(sorted_phases.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted_phases.size(); ++i) {
    const double f = cdf(sorted_phases[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return {d, kolmogorov_sf(std::sqrt(n) * d)};
}

// Two-sample Kolmogorov-Smirnov with the asymptotic p-value at the effective
// sample size n m / (n + m).
inline KsResult ks_test_two_sample(const std::vector<double>& a_sorted,
                                   const std::vector<double>& b_sorted) {
  if (a_sorted.empty() || b_sorted.empty()) {
    throw InvalidParams("ks_test_two_sample: empty sample");
  }
  const std::size_t n = a_sorted.size(), m = b_sorted.size();
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < n && j < m) {
    if (a_sorted[i] <= b_sorted[j]) {
      ++i;
    } else {
      ++j;
    }
    d = std::max(d, std::abs(static_cast<double>(i) / n -
                             static_cast<double>(j) / m));
  }
  const double n_eff = static_cast<double>(n) * static_cast<double>(m) /
                       static_cast<double>(n + m);
  return {d, kolmogorov_sf(std::sqrt(n_eff) * d)};
}

struct MomentCheck {
  double empirical_mean = 0.0;
  double standard_error = 0.0;
  double z_score = 0.0;
};

// Per-sample moment statistic T = sum_j cos(k theta_j), averaged over the
// batch and compared with the analytic expectation.
inline MomentCheck moment_check(const std::vector<PhaseVector>& batch, int k,
                                double analytic) {
  if (batch.empty()) throw InvalidParams("moment_check: empty batch");
  const auto s = static_cast<double>(batch.size());
  std::vector<double> t(batch.size(), 0.0);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    double acc = 0.0;
    for (double theta : batch[i].phases) acc += std::cos(k * theta);
    t[i] = acc;
  }
  double mean = 0.0;
  for (double v : t) mean += v;
  mean /= s;
  double var = 0.0;
  for (double v : t) var += (v - mean) * (v - mean);
  var = (batch.size() > 1) ? var / (s - 1.0) : 0.0;
  const double se = std::sqrt(var / s);

  MomentCheck mc;
  mc.empirical_mean = mean;
  mc.standard_error = se;
  if (se > 0.0) {
    mc.z_score = (mean - analytic) / se;
  } else {
    mc.z_score = (mean == analytic)
                     ? 0.0
                     : std::numeric_limits<double>::infinity();
  }
  return mc;
}

}  // namespace unicirc
