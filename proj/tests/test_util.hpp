#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "cje/types.hpp"

namespace cje::testing {

/// Random Verblunsky-like sequence: n-1 points in the disk of radius `radius`
/// and a last point on the circle.
inline std::vector<cplx> random_coefficients(std::mt19937_64& gen, std::size_t n,
                                             double radius = 0.95) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    out[k] = std::polar(radius * std::sqrt(u(gen)), 2.0 * M_PI * u(gen));
  }
  out[n - 1] = std::polar(1.0, 2.0 * M_PI * u(gen));
  return out;
}

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace cje::testing

#include <functional>

#include "cje/quadrature.hpp"

namespace cje::testing {

/// Polar binning of the unit disk: radial edges in |z|^2 and equal angular
/// sectors. Expected bin masses come from a tensor Gauss-Legendre rule applied
/// to an arbitrary density evaluator (independent of any sampler).
struct DiskBins {
  std::vector<double> r2_edges;  // increasing, from 0 to 1
  int sectors = 12;

  std::size_t count() const { return (r2_edges.size() - 1) * static_cast<std::size_t>(sectors); }

  std::size_t index(cplx z) const {
    const double r2 = std::norm(z);
    std::size_t ri = 0;
    while (ri + 2 < r2_edges.size() && r2 >= r2_edges[ri + 1]) ++ri;
    double psi = std::arg(z);
    if (psi < 0.0) psi += 2.0 * M_PI;
    auto si = static_cast<std::size_t>(psi / (2.0 * M_PI) * sectors);
    if (si >= static_cast<std::size_t>(sectors)) si = static_cast<std::size_t>(sectors) - 1;
    return ri * static_cast<std::size_t>(sectors) + si;
  }

  std::vector<double> masses(const std::function<double(cplx)>& density, std::size_t order = 12) const {
    const QuadratureRule gl = gauss_legendre(order);
    std::vector<double> out(count(), 0.0);
    for (std::size_t ri = 0; ri + 1 < r2_edges.size(); ++ri) {
      const double a = r2_edges[ri];
      const double b = r2_edges[ri + 1];
      for (int si = 0; si < sectors; ++si) {
        const double p0 = 2.0 * M_PI * si / sectors;
        const double p1 = 2.0 * M_PI * (si + 1) / sectors;
        double acc = 0.0;
        for (std::size_t i = 0; i < order; ++i) {
          // d^2 z = (1/2) d(r^2) d psi
          const double r2 = a + (b - a) * (gl.nodes[i] + 1.0) / 2.0;
          for (std::size_t j = 0; j < order; ++j) {
            const double psi = p0 + (p1 - p0) * (gl.nodes[j] + 1.0) / 2.0;
            acc += gl.weights[i] * gl.weights[j] * density(std::polar(std::sqrt(r2), psi));
          }
        }
        out[ri * static_cast<std::size_t>(sectors) + static_cast<std::size_t>(si)] =
            acc * (b - a) / 2.0 * (p1 - p0) / 2.0 * 0.5;
      }
    }
    return out;
  }
};

/// Radial edges at the quantiles of |z|^2 ~ Beta(1, a), so each ring holds
/// comparable mass for radial exponent a.
inline std::vector<double> beta1_quantile_edges(double a, int rings) {
  std::vector<double> edges{0.0};
  for (int i = 1; i < rings; ++i) {
    edges.push_back(1.0 - std::pow(1.0 - static_cast<double>(i) / rings, 1.0 / a));
  }
  edges.push_back(1.0);
  return edges;
}

}  // namespace cje::testing
