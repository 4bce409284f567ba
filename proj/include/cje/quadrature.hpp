#pragma once

// Numerical integration helpers: adaptive 1D rules (Boost tanh-sinh and
// Gauss-Kronrod), Gauss-Legendre rules, and disk integrals in coordinates
// centered at z = 1.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "cje/errors.hpp"
#include "cje/types.hpp"

namespace cje {

/// Adaptive tanh-sinh on (a, b). Endpoint singularities are fine as long as
/// the integrand is never evaluated exactly at a or b.
template <class F>
double integrate_tanh_sinh(F&& f, double a, double b, double tol = 1e-12) {
  static thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
  double error = 0.0;
  double l1 = 0.0;
  const double value = rule.integrate(f, a, b, tol, &error, &l1);
  if (!std::isfinite(value)) throw NumericError("integrate_tanh_sinh: non-finite result");
  return value;
}

/// Adaptive Gauss-Kronrod (61 points) on [a, b] for smooth integrands.
template <class F>
double integrate_kronrod(F&& f, double a, double b, double tol = 1e-12, unsigned max_depth = 20) {
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, tol, &error);
  if (!std::isfinite(value)) throw NumericError("integrate_kronrod: non-finite result");
  return value;
}

/// Complex integrand on (a, b) by tanh-sinh applied to real and imaginary parts.
template <class F>
cplx integrate_complex(F&& f, double a, double b, double tol = 1e-12) {
  const double re = integrate_tanh_sinh([&](double x) { return f(x).real(); }, a, b, tol);
  const double im = integrate_tanh_sinh([&](double x) { return f(x).imag(); }, a, b, tol);
  return {re, im};
}

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the three-term recurrence.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline QuadratureRule gauss_legendre(std::size_t n) {
  if (n == 0) throw ParameterError("gauss_legendre: need at least one node");
  QuadratureRule rule;
  if (n == 1) return {{0.0}, {2.0}};
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 =
            ((2.0 * static_cast<double>(k) - 1.0) * x * p1 - (static_cast<double>(k) - 1.0) * p0) /
            static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double p2 =
          ((2.0 * static_cast<double>(k) - 1.0) * x * p1 - (static_cast<double>(k) - 1.0) * p0) /
          static_cast<double>(k);
      p0 = p1;
      p1 = p2;
    }
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

/// A point of the unit disk in the coordinates 1 - z = 2 u cos(phi) e^{i phi},
/// u in (0, 1), phi in (-pi/2, pi/2). Area element 4 u cos^2(phi) du dphi.
struct DiskPoint {
  double u;
  double phi;
  cplx z;
  cplx one_minus_z;
  double one_minus_r2;  // 1 - |z|^2 = 4 u (1 - u) cos^2(phi), free of cancellation
};

inline DiskPoint disk_point(double u, double phi) {
  const double c = std::cos(phi);
  const cplx w = 2.0 * u * c * std::polar(1.0, phi);
  return {u, phi, 1.0 - w, w, 4.0 * u * (1.0 - u) * c * c};
}

/// Integral over the unit disk of a real function of DiskPoint (Lebesgue area
/// measure), nested tanh-sinh in u and phi. Singularities at z = 1 and at the
/// boundary circle sit on the edges of the (u, phi) rectangle.
template <class F>
double integrate_disk(F&& f, double tol = 1e-10) {
  auto inner = [&](double phi) {
    const double c = std::cos(phi);
    return integrate_tanh_sinh(
        [&](double u) { return f(disk_point(u, phi)) * 4.0 * u * c * c; }, 0.0, 1.0, tol);
  };
  return integrate_tanh_sinh(inner, -kPi / 2.0, kPi / 2.0, tol);
}

/// Complex version of integrate_disk.
template <class F>
cplx integrate_disk_complex(F&& f, double tol = 1e-10) {
  const double re = integrate_disk([&](const DiskPoint& p) { return f(p).real(); }, tol);
  const double im = integrate_disk([&](const DiskPoint& p) { return f(p).imag(); }, tol);
  return {re, im};
}

}  // namespace cje
