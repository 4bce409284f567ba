#pragma once

// Closed-form evaluators and limit objects of the circular Jacobi ensemble:
// Mellin-Fourier transform of the characteristic polynomial at 1, partition
// functions, the equilibrium measure mu_d, the potential Q_d, the free entropy,
// the rate function, and distances between measures on the circle.

#include <boost/math/special_functions/trigamma.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "cje/errors.hpp"
#include "cje/quadrature.hpp"
#include "cje/special.hpp"
#include "cje/tolerances.hpp"
#include "cje/types.hpp"

namespace cje {

// ---------------------------------------------------------------------------
// Gamma-function products

/// Log of the Mellin-Fourier transform E[|Z|^t e^{i s arg Z}], Z = det(Id - U):
/// sum over k of the logs of G(b k+1+d) G(b k+1+conj d) G(b k+1+d+conj d+t) /
///        [G(b k+1+d+conj d) G(b k+1+d+(t-s)/2) G(b k+1+conj d+(t+s)/2)].
/// arg Z is the sum of the arguments of the factors 1 - gamma_k, each in (-pi/2, pi/2).
inline cplx log_mellin_fourier(const EnsembleParams& params, cplx s, cplx t) {
  params.validate();
  if (!(t.real() > -0.5)) throw ParameterError("mellin_fourier: need Re(t) > -1/2");
  const double b = params.beta_prime();
  const cplx d = params.delta;
  const cplx dbar = std::conj(d);
  cplx acc{0.0, 0.0};
  for (int k = 0; k < params.n; ++k) {
    const double c = b * static_cast<double>(k) + 1.0;
    acc += complex_log_gamma(c + d) + complex_log_gamma(c + dbar) +
           complex_log_gamma(c + d + dbar + t) - complex_log_gamma(c + d + dbar) -
           complex_log_gamma(c + d + (t - s) / 2.0) - complex_log_gamma(c + dbar + (t + s) / 2.0);
  }
  return acc;
}

inline cplx mellin_fourier(const EnsembleParams& params, cplx s, cplx t) {
  return std::exp(log_mellin_fourier(params, s, t));
}

/// E[(1 - gamma_k)^s] = G(a+d+conj d+s+1) G(a+conj d+1) / [G(a+d+conj d+1) G(a+conj d+s+1)],
/// a = beta' (n - k - 1).
inline cplx moment_one_minus_gamma(int k, const EnsembleParams& params, cplx s) {
  params.validate();
  if (k < 0 || k >= params.n) throw ParameterError("moment_one_minus_gamma: k out of range");
  const double a = params.beta_prime() * static_cast<double>(params.n - k - 1);
  const cplx d = params.delta;
  const cplx dbar = std::conj(d);
  return std::exp(complex_log_gamma(a + d + dbar + s + 1.0) + complex_log_gamma(a + dbar + 1.0) -
                  complex_log_gamma(a + d + dbar + 1.0) - complex_log_gamma(a + dbar + s + 1.0));
}

/// log Z_{s,t}(n) for the integral over [0, 2 pi)^n normalized by (d theta / 2 pi)^n:
/// G(b n + 1) / G(b + 1)^n prod_{j<n} G(b j+1) G(b j+1+s+t) / [G(b j+1+s) G(b j+1+t)].
inline cplx log_partition_zst(int n, double beta, cplx s, cplx t) {
  if (n < 1 || !(beta > 0.0)) throw ParameterError("partition_zst: need n >= 1, beta > 0");
  const double b = beta / 2.0;
  cplx acc = log_gamma_real(b * n + 1.0) - static_cast<double>(n) * log_gamma_real(b + 1.0);
  for (int j = 0; j < n; ++j) {
    const double c = b * static_cast<double>(j) + 1.0;
    acc += log_gamma_real(c) + complex_log_gamma(c + s + t) - complex_log_gamma(c + s) -
           complex_log_gamma(c + t);
  }
  return acc;
}

inline cplx partition_zst(int n, double beta, cplx s, cplx t) {
  return std::exp(log_partition_zst(n, beta, s, t));
}

/// int_D (1 - |z|^2)^(l-1) (1 - z)^s (1 - conj z)^t d^2z
///   = pi G(l) G(l+1+s+t) / [G(l+1+s) G(l+1+t)],  l > 0, Re(s + t) > -1 - l.
inline cplx disk_integral(double l, cplx s, cplx t) {
  if (!(l > 0.0)) throw ParameterError("disk_integral: need l > 0");
  if (!((s + t).real() > -1.0 - l)) throw ParameterError("disk_integral: need Re(s + t) > -1 - l");
  return kPi * std::exp(log_gamma_real(l) + complex_log_gamma(l + 1.0 + s + t) -
                        complex_log_gamma(l + 1.0 + s) - complex_log_gamma(l + 1.0 + t));
}

/// Same integral by nested adaptive quadrature.
inline cplx disk_integral_numeric(double l, cplx s, cplx t, double tol = 1e-10) {
  return integrate_disk_complex(
      [&](const DiskPoint& p) {
        const cplx w = p.one_minus_z;
        return std::pow(p.one_minus_r2, l - 1.0) * std::pow(w, s) * std::pow(std::conj(w), t);
      },
      tol);
}

/// (log Z_d(n) - log Z_0(n)) / (beta' n^2) with Z_d(n) = Z_{conj(d) beta' n, d beta' n}(n).
/// Tends to b_const(d) as n grows.
inline double b_const_finite_n(cplx d, int n, double beta) {
  if (d.real() < 0.0) throw DomainError("b_const_finite_n: need Re(d) >= 0");
  if (n < 1 || !(beta > 0.0)) throw ParameterError("b_const_finite_n: need n >= 1, beta > 0");
  const double b = beta / 2.0;
  const double scale = b * static_cast<double>(n);
  const cplx t = d * scale;
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const double c = b * static_cast<double>(j) + 1.0;
    acc += log_gamma_real(c + 2.0 * t.real()) + log_gamma_real(c) -
           2.0 * complex_log_gamma(c + t).real();
  }
  return acc / (b * static_cast<double>(n) * static_cast<double>(n));
}

/// B(d) = int_0^1 [x log x + (x + 2 Re d) log(x + 2 Re d)] dx
///        - 2 Re int_0^1 (x + d) log(x + d) dx, by adaptive quadrature.
inline double b_const(cplx d) {
  if (d.real() < 0.0) throw DomainError("b_const: need Re(d) >= 0");
  const double r = 2.0 * d.real();
  auto xlogx = [](cplx z) { return std::abs(z) == 0.0 ? cplx{0.0, 0.0} : z * std::log(z); };
  const double first = integrate_tanh_sinh(
      [&](double x) { return xlogx(x).real() + xlogx(x + r).real(); }, 0.0, 1.0, 1e-13);
  const double second = integrate_tanh_sinh(
      [&](double x) { return 2.0 * xlogx(x + d).real(); }, 0.0, 1.0, 1e-13);
  return first - second;
}

/// Q_d(e^{i theta}) = -2 Re(d) log(2 sin(theta/2)) - Im(d) (theta - pi) on (0, 2 pi);
/// at theta = 0 it is +inf when Re d > 0 and -|Im d| pi when Re d = 0.
inline double potential_q(cplx d, double theta) {
  const double t = wrap_angle(theta);
  if (t == 0.0) {
    if (d.real() > 0.0) return std::numeric_limits<double>::infinity();
    return -std::abs(d.imag()) * kPi;
  }
  return -2.0 * d.real() * std::log(2.0 * std::sin(t / 2.0)) - d.imag() * (t - kPi);
}

// ---------------------------------------------------------------------------
// Equilibrium measure mu_d

struct LimitParams {
  cplx d;
  cplx alpha_d;
  double theta_d;
  double xi_d;

  bool is_haar() const { return d == cplx{0.0, 0.0}; }
  /// Support arc (lower, upper) in [0, 2 pi].
  double lower() const { return theta_d + xi_d; }
  double upper() const { return kTwoPi - theta_d + xi_d; }
};

/// alpha_d = -conj(d) / (1 + conj d), sin(theta_d / 2) = |d / (1 + d)|,
/// e^{i xi_d} = (1 + d) / (1 + conj d) with xi_d in [-theta_d, theta_d].
inline LimitParams limit_params(cplx d) {
  if (d.real() < 0.0) throw DomainError("limit_params: need Re(d) >= 0");
  LimitParams lp;
  lp.d = d;
  lp.alpha_d = -std::conj(d) / (1.0 + std::conj(d));
  lp.theta_d = 2.0 * std::asin(std::min(1.0, std::abs(d / (1.0 + d))));
  lp.xi_d = std::arg((1.0 + d) / (1.0 + std::conj(d)));
  const double excess = std::abs(lp.xi_d) - lp.theta_d;
  if (excess > 1e-12) {
    throw NumericError("limit_params: xi_d falls outside [-theta_d, theta_d]");
  }
  if (excess > 0.0) lp.xi_d = std::copysign(lp.theta_d, lp.xi_d);
  return lp;
}

/// A point of the arc (a, b) with its distances to both endpoints, obtained
/// from theta = a + (b - a)(1 - cos s)/2 without cancellation.
struct ArcPoint {
  double theta;
  double from_lower;
  double to_upper;
};

inline ArcPoint arc_point(double a, double b, double s) {
  const double len = b - a;
  const double sl = std::sin(s / 2.0);
  const double cl = std::cos(s / 2.0);
  const double dl = len * sl * sl;
  const double du = len * cl * cl;
  return {dl < du ? a + dl : b - du, dl, du};
}

namespace detail {

// sin^2((theta - xi)/2) - sin^2(theta_d/2) = sin((theta - lower)/2) sin((upper - theta)/2),
// and sin(theta/2) is taken from the nearer of theta and 2 pi - theta.
inline double w_d_at(const LimitParams& lp, const ArcPoint& p) {
  if (!(p.from_lower > 0.0 && p.to_upper > 0.0)) return 0.0;
  const double num = std::sqrt(std::sin(p.from_lower / 2.0) * std::sin(p.to_upper / 2.0));
  const double gap_top = (kTwoPi - lp.upper()) + p.to_upper;
  const double half = std::min(p.theta, gap_top) / 2.0;
  return num / (std::abs(1.0 + lp.alpha_d) * std::sin(half));
}

// int over the arc with s in (s0, s1) of f(theta) w_d(theta) d theta / 2 pi.
template <class F>
auto integrate_mu_d(const LimitParams& lp, double s0, double s1, F&& f, double tol) {
  const double a = lp.lower();
  const double b = lp.upper();
  auto integrand = [&](double s) {
    const ArcPoint p = arc_point(a, b, s);
    return f(p.theta) * (w_d_at(lp, p) * (b - a) * std::sin(s) / 2.0 / kTwoPi);
  };
  using R = decltype(f(0.0));
  if constexpr (std::is_same_v<R, cplx>) {
    return integrate_complex(integrand, s0, s1, tol);
  } else {
    return integrate_tanh_sinh(integrand, s0, s1, tol);
  }
}

// Substitution variable s of the arc point theta.
inline double arc_parameter(const LimitParams& lp, double theta) {
  const double x = std::clamp((theta - lp.lower()) / (lp.upper() - lp.lower()), 0.0, 1.0);
  return 2.0 * std::asin(std::sqrt(x));
}

}  // namespace detail

/// Density of mu_d with respect to d theta / 2 pi:
/// sqrt(sin^2((theta - xi_d)/2) - sin^2(theta_d/2)) / (|1 + alpha_d| sin(theta/2))
/// on the support arc, 0 outside; identically 1 for d = 0.
inline double w_d(const LimitParams& lp, double theta) {
  if (lp.is_haar()) return 1.0;
  const double t = wrap_angle(theta);
  return detail::w_d_at(lp, {t, t - lp.lower(), lp.upper() - t});
}

/// mu_d([0, t]) for t in [0, 2 pi].
inline double mu_d_cdf(const LimitParams& lp, double t) {
  if (lp.is_haar()) return std::clamp(t, 0.0, kTwoPi) / kTwoPi;
  if (t <= lp.lower()) return 0.0;
  if (t >= lp.upper()) return 1.0;
  return detail::integrate_mu_d(lp, 0.0, detail::arc_parameter(lp, t), [](double) { return 1.0; },
                                1e-11);
}

/// mu_d([0, t_i]) at increasing t_i, integrating only between neighbours.
inline std::vector<double> mu_d_cdf_sorted(const LimitParams& lp, std::span<const double> ts) {
  std::vector<double> out(ts.size());
  if (lp.is_haar()) {
    for (std::size_t i = 0; i < ts.size(); ++i) out[i] = mu_d_cdf(lp, ts[i]);
    return out;
  }
  double acc = 0.0;
  double from = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i > 0 && ts[i] < ts[i - 1]) throw ParameterError("mu_d_cdf_sorted: angles must increase");
    const double to = detail::arc_parameter(lp, ts[i]);
    if (to > from) {
      acc += detail::integrate_mu_d(lp, from, to, [](double) { return 1.0; }, 1e-10);
      from = to;
    }
    out[i] = ts[i] >= lp.upper() ? 1.0 : std::min(acc, 1.0);
  }
  return out;
}

/// m_k(mu_d) = int e^{i k theta} w_d(theta) d theta / 2 pi.
inline cplx mu_d_moment(const LimitParams& lp, int k) {
  if (lp.is_haar()) return k == 0 ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
  return detail::integrate_mu_d(
      lp, 0.0, kPi, [k](double t) { return std::polar(1.0, static_cast<double>(k) * t); }, 1e-11);
}

// ---------------------------------------------------------------------------
// Densities on a grid

/// A probability density on an arc of the circle tabulated on quadrature
/// nodes: int f d mu = sum_i quad[i] * value[i] * f(node[i]), with the
/// d theta / 2 pi normalization folded into quad.
struct ArcDensity {
  std::vector<double> nodes;
  std::vector<double> quad;
  std::vector<double> values;

  double mass() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += quad[i] * values[i];
    return acc;
  }

  template <class F>
  auto integrate(F&& f) const {
    using R = decltype(f(0.0));
    R acc{};
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += quad[i] * values[i] * f(nodes[i]);
    return acc;
  }

  cplx moment(int k) const {
    return integrate([k](double t) { return std::polar(1.0, static_cast<double>(k) * t); });
  }

  /// Atoms at the nodes with masses quad * value, normalized.
  SpectralMeasure to_measure() const {
    std::vector<double> w(nodes.size());
    double total = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) total += w[i] = quad[i] * values[i];
    for (double& x : w) x /= total;
    return SpectralMeasure(nodes, std::move(w));
  }
};

/// Gauss-Legendre grid on (a, b) after theta = a + (b - a)(1 - cos s)/2; the
/// substitution smooths square-root behaviour at both endpoints.
inline ArcDensity arc_grid(double a, double b, std::size_t nodes,
                           const std::function<double(const ArcPoint&)>& density) {
  if (!(b > a)) throw ParameterError("arc_grid: empty arc");
  const QuadratureRule gl = gauss_legendre(nodes);
  ArcDensity out;
  out.nodes.reserve(nodes);
  out.quad.reserve(nodes);
  out.values.reserve(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double s = kPi * (gl.nodes[i] + 1.0) / 2.0;
    const ArcPoint p = arc_point(a, b, s);
    const double jac = (b - a) * std::sin(s) / 2.0 * (kPi / 2.0);
    out.nodes.push_back(p.theta);
    out.quad.push_back(gl.weights[i] * jac / kTwoPi);
    out.values.push_back(density(p));
  }
  return out;
}

/// mu_d on its support arc (Haar on (0, 2 pi) for d = 0).
inline ArcDensity mu_d_grid(const LimitParams& lp, std::size_t nodes = 4096) {
  if (lp.is_haar()) return arc_grid(0.0, kTwoPi, nodes, [](const ArcPoint&) { return 1.0; });
  return arc_grid(lp.lower(), lp.upper(), nodes,
                  [&](const ArcPoint& p) { return detail::w_d_at(lp, p); });
}

/// Haar measure on a grid over (0, 2 pi).
inline ArcDensity haar_grid(std::size_t nodes = 4096) {
  return arc_grid(0.0, kTwoPi, nodes, [](const ArcPoint&) { return 1.0; });
}

// ---------------------------------------------------------------------------
// Free entropy and rate function

struct SigmaReport {
  double value = 0.0;  // -sum_k |m_k|^2 / k including the tail estimate
  double tail = 0.0;   // estimated contribution of k > terms
  int terms = 0;
  bool truncation_warning = false;
};

/// Sigma(mu) = -sum_{k>=1} |m_k|^2 / k from the first K moments. The tail is
/// estimated as C * sum_{k>K} 1/k^2 with C the mean of k |m_k|^2 over [K/2, K].
inline SigmaReport sigma_energy(const ArcDensity& density, int terms = 400) {
  if (terms < 2) throw ParameterError("sigma_energy: need at least two terms");
  SigmaReport r;
  r.terms = terms;
  double partial = 0.0;
  double tail_level = 0.0;
  int tail_count = 0;
  for (int k = 1; k <= terms; ++k) {
    const double m2 = std::norm(density.moment(k));
    partial += m2 / k;
    if (2 * k >= terms) {
      tail_level += k * m2;
      ++tail_count;
    }
  }
  tail_level /= tail_count;
  r.tail = tail_level * boost::math::trigamma(static_cast<double>(terms) + 1.0);
  r.value = -(partial + r.tail);
  r.truncation_warning = r.tail > 1e-4;
  return r;
}

struct RateReport {
  double sigma = 0.0;
  double potential_term = 0.0;
  double b_const = 0.0;
  double rate = 0.0;
  double sigma_tail = 0.0;
  bool truncation_warning = false;
};

/// I_d(mu) = -Sigma(mu) + int Q_d d mu + B(d) for a density on a grid.
inline RateReport rate_function(cplx d, const ArcDensity& density, int terms = 400) {
  if (d.real() < 0.0) throw DomainError("rate_function: need Re(d) >= 0");
  const SigmaReport sigma = sigma_energy(density, terms);
  RateReport r;
  r.sigma = sigma.value;
  r.sigma_tail = sigma.tail;
  r.truncation_warning = sigma.truncation_warning;
  r.potential_term = density.integrate([d](double t) { return potential_q(d, t); });
  r.b_const = b_const(d);
  r.rate = -r.sigma + r.potential_term + r.b_const;
  return r;
}

// ---------------------------------------------------------------------------
// Empirical measures and distances

/// Atoms with angles in [0, 2 pi) sorted increasingly, weights summing to 1.
class EmpiricalMeasure {
 public:
  EmpiricalMeasure(std::vector<double> angles, std::vector<double> weights) {
    if (angles.empty() || angles.size() != weights.size()) {
      throw ParameterError("EmpiricalMeasure: need as many weights as atoms (>= 1)");
    }
    std::vector<std::size_t> order(angles.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (double& a : angles) a = wrap_angle(a);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return angles[x] < angles[y]; });
    double total = 0.0;
    for (const std::size_t i : order) {
      angles_.push_back(angles[i]);
      weights_.push_back(weights[i]);
      total += weights[i];
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw ParameterError("EmpiricalMeasure: weights must sum to 1");
    }
  }

  /// Uniform masses 1/n on the given angles.
  static EmpiricalMeasure esd(std::vector<double> angles) {
    const std::size_t n = angles.size();
    return EmpiricalMeasure(std::move(angles), std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  /// Atoms and weights of a spectral measure.
  static EmpiricalMeasure spectral(const SpectralMeasure& m) {
    return EmpiricalMeasure({m.thetas().begin(), m.thetas().end()},
                            {m.weights().begin(), m.weights().end()});
  }

  std::span<const double> angles() const { return angles_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return angles_.size(); }

  /// mu([0, t]).
  double cdf(double t) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < angles_.size() && angles_[i] <= t; ++i) acc += weights_[i];
    return std::min(acc, 1.0);
  }

 private:
  std::vector<double> angles_;
  std::vector<double> weights_;
};

/// sup_t |F_a(t) - F_b(t)| over [0, 2 pi); an upper bound for the Levy distance.
inline double ks_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  std::size_t i = 0;
  std::size_t j = 0;
  double fa = 0.0;
  double fb = 0.0;
  double best = 0.0;
  while (i < a.size() || j < b.size()) {
    const double ta = i < a.size() ? a.angles()[i] : std::numeric_limits<double>::infinity();
    const double tb = j < b.size() ? b.angles()[j] : std::numeric_limits<double>::infinity();
    const double t = std::min(ta, tb);
    while (i < a.size() && a.angles()[i] == t) fa += a.weights()[i++];
    while (j < b.size() && b.angles()[j] == t) fb += b.weights()[j++];
    best = std::max(best, std::abs(fa - fb));
  }
  return best;
}

/// sup_t |F_a(t) - F(t)| against a continuous CDF supplied at the atoms of a
/// (cdf_at_atoms[i] = F(a.angles()[i])).
inline double ks_distance(const EmpiricalMeasure& a, std::span<const double> cdf_at_atoms) {
  if (cdf_at_atoms.size() != a.size()) throw ParameterError("ks_distance: size mismatch");
  double before = 0.0;
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double after = before + a.weights()[i];
    best = std::max({best, std::abs(before - cdf_at_atoms[i]), std::abs(after - cdf_at_atoms[i])});
    before = after;
  }
  return best;
}

/// KS distance between an empirical measure and mu_d.
inline double ks_distance(const EmpiricalMeasure& a, const LimitParams& lp) {
  const auto cdf = mu_d_cdf_sorted(lp, a.angles());
  return ks_distance(a, cdf);
}

/// max_k |S_k - k/n| with S_k the cumulative spectral weight of the first k atoms
/// in angular order.
inline double weight_gap_stat(const SpectralMeasure& measure) {
  const EmpiricalMeasure m = EmpiricalMeasure::spectral(measure);
  const double n = static_cast<double>(m.size());
  double s = 0.0;
  double best = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    s += m.weights()[k];
    best = std::max(best, std::abs(s - static_cast<double>(k + 1) / n));
  }
  return best;
}

}  // namespace cje
