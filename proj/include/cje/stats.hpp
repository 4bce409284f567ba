#pragma once

// Goodness-of-fit and summary statistics used by the verification suites.

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "cje/errors.hpp"

namespace cje {

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  int bins_used = 0;
  double p_value = 1.0;
};

/// Pearson chi-square test. Neighbouring bins are pooled until each pooled
/// bin expects at least `min_expected` counts; dof = pooled bins - 1 - fitted.
inline ChiSquareResult chi_square_test(std::span<const double> observed,
                                       std::span<const double> expected, int fitted = 0,
                                       double min_expected = 5.0) {
  if (observed.size() != expected.size() || observed.empty()) {
    throw ParameterError("chi_square_test: observed and expected must match");
  }
  std::vector<double> obs;
  std::vector<double> exp;
  double o = 0.0;
  double e = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o += observed[i];
    e += expected[i];
    if (e >= min_expected) {
      obs.push_back(o);
      exp.push_back(e);
      o = e = 0.0;
    }
  }
  if (e > 0.0 || o > 0.0) {
    if (obs.empty()) {
      obs.push_back(o);
      exp.push_back(e);
    } else {
      obs.back() += o;
      exp.back() += e;
    }
  }
  ChiSquareResult r;
  r.bins_used = static_cast<int>(obs.size());
  r.dof = r.bins_used - 1 - fitted;
  if (r.dof < 1) throw ParameterError("chi_square_test: too few bins after pooling");
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double diff = obs[i] - exp[i];
    r.statistic += diff * diff / exp[i];
  }
  const boost::math::chi_squared dist(r.dof);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

/// Asymptotic Kolmogorov p-value P(D_n > d) with Stephens' small-sample correction.
inline double ks_p_value(double d, std::size_t n) {
  if (n == 0) throw ParameterError("ks_p_value: need n >= 1");
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct MeanStat {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;

  /// |mean - target| / std_error.
  double z_score(double target) const {
    return std_error > 0.0 ? std::abs(mean - target) / std_error
                           : (mean == target ? 0.0 : std::numeric_limits<double>::infinity());
  }
};

inline MeanStat mean_stat(std::span<const double> xs) {
  if (xs.size() < 2) throw ParameterError("mean_stat: need at least two values");
  MeanStat m;
  m.count = xs.size();
  double acc = 0.0;
  for (const double x : xs) acc += x;
  m.mean = acc / static_cast<double>(xs.size());
  double ss = 0.0;
  for (const double x : xs) ss += (x - m.mean) * (x - m.mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  m.std_error = std::sqrt(var / static_cast<double>(xs.size()));
  return m;
}

/// Median of a copy of xs.
inline double median(std::vector<double> xs) {
  if (xs.empty()) throw ParameterError("median: empty input");
  const std::size_t mid = xs.size() / 2;
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
  double m = xs[mid];
  if (xs.size() % 2 == 0) {
    m = (m + *std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid))) / 2.0;
  }
  return m;
}

}  // namespace cje
