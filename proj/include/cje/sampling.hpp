#pragma once

// Exact random generation of the deformed Verblunsky coefficients of the
// circular Jacobi ensemble and of the auxiliary laws (nu_s, Beta, Gamma,
// Dirichlet, lambda^(delta)), with density evaluators.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "cje/errors.hpp"
#include "cje/rng.hpp"
#include "cje/special.hpp"
#include "cje/types.hpp"

namespace cje {

/// Counters kept by the rejection samplers.
struct RejectionStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;

  double acceptance_rate() const {
    return proposals == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposals);
  }
};

/// Density parameters of one deformed coefficient: radial exponent a, so the
/// radial factor is (1 - |z|^2)^(a - 1), and the Jacobi parameter delta.
struct DiskDensitySpec {
  double a = 1.0;
  cplx delta{0.0, 0.0};

  void validate() const {
    if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("DiskDensitySpec: a must be > 0");
    if (!(delta.real() > -0.5)) throw ParameterError("DiskDensitySpec: need Re(delta) > -1/2");
  }
};

// ---------------------------------------------------------------------------
// Real variates

/// Gamma(k, 1). libstdc++ uses Marsaglia-Tsang with the U^(1/k) boost below 1.
inline double sample_gamma_shape(SeededRng& rng, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw ParameterError("sample_gamma_shape: need k > 0");
  std::gamma_distribution<double> dist(k, 1.0);
  return dist(rng);
}

/// Beta(a, b) as X / (X + Y) with independent Gamma variates.
inline double sample_beta(SeededRng& rng, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw ParameterError("sample_beta: need a, b > 0");
  for (;;) {
    const double x = sample_gamma_shape(rng, a);
    const double y = sample_gamma_shape(rng, b);
    const double s = x + y;
    if (s > 0.0) {
      const double r = x / s;
      if (r > 0.0 && r < 1.0) return r;
    }
  }
}

/// Dirichlet(a_1, ..., a_n) by normalizing independent Gamma(a_i) variates.
inline std::vector<double> sample_dirichlet(SeededRng& rng, std::span<const double> a) {
  if (a.empty()) throw ParameterError("sample_dirichlet: empty parameter vector");
  for (const double ai : a) {
    if (!(ai > 0.0)) throw ParameterError("sample_dirichlet: parameters must be > 0");
  }
  std::vector<double> x(a.size());
  for (;;) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      x[i] = sample_gamma_shape(rng, a[i]);
      total += x[i];
    }
    if (total > 0.0) {
      for (double& xi : x) xi /= total;
      return x;
    }
  }
}

// ---------------------------------------------------------------------------
// nu_s

/// Density (s - 1) / (2 pi) (1 - |z|^2)^((s - 3) / 2) of nu_s on the disk, s > 1.
inline double nu_s_density(double s, cplx z) {
  if (!(s > 1.0)) throw ParameterError("nu_s_density: need s > 1");
  const double r2 = std::norm(z);
  if (!(r2 < 1.0)) throw DomainError("nu_s_density: need |z| < 1");
  return (s - 1.0) / kTwoPi * std::pow(1.0 - r2, (s - 3.0) / 2.0);
}

/// nu_s: R e^{i psi}, psi uniform, R^2 ~ Beta(1, (s - 1) / 2); nu_1 is uniform on T.
inline cplx sample_nu_s(SeededRng& rng, double s) {
  if (!(s >= 1.0) || !std::isfinite(s)) throw ParameterError("sample_nu_s: need s >= 1");
  const double psi = kTwoPi * rng.uniform();
  if (s == 1.0) return std::polar(1.0, psi);
  const double b = (s - 1.0) / 2.0;
  // Inverse CDF of Beta(1, b): x = 1 - U^(1/b).
  const double r2 = -std::expm1(std::log(rng.uniform_open()) / b);
  return std::polar(std::sqrt(r2), psi);
}

// ---------------------------------------------------------------------------
// Tilted cosine law on (-pi/2, pi/2)

/// Law with density proportional to cos(phi)^p exp(q phi) on (-pi/2, pi/2),
/// p >= 0. Its normalizer is pi Gamma(p+1) / (2^p |Gamma(1 + (p + i q)/2)|^2).
///
/// The density is log-concave, so rejection from the envelope
/// f(m) min(1, exp(1 - f(m)|x - m|)) around the mode m is exact and accepts
/// with probability at least 1/4.
class TiltedCosineLaw {
 public:
  TiltedCosineLaw(double p, double q) : p_(p), q_(q) {
    if (!(p >= 0.0) || !std::isfinite(q)) {
      throw ParameterError("TiltedCosineLaw: need p >= 0 and finite q");
    }
    log_norm_ = std::log(kPi) + log_gamma_real(p + 1.0) - p * std::log(2.0) -
                2.0 * complex_log_gamma(cplx{1.0 + p / 2.0, q / 2.0}).real();
    mode_ = (p == 0.0 && q == 0.0) ? 0.0 : std::atan2(q, p);
    mode_density_ = density(mode_);
  }

  double log_density(double phi) const {
    if (!(phi > -kPi / 2.0 && phi < kPi / 2.0)) {
      if (p_ == 0.0 && std::abs(phi) <= kPi / 2.0) return q_ * phi - log_norm_;
      return -std::numeric_limits<double>::infinity();
    }
    const double radial = p_ == 0.0 ? 0.0 : p_ * std::log(std::cos(phi));
    return radial + q_ * phi - log_norm_;
  }

  double density(double phi) const { return std::exp(log_density(phi)); }
  double log_normalizer() const { return log_norm_; }
  double mode() const { return mode_; }

  double sample(SeededRng& rng, RejectionStats* stats = nullptr) const {
    const double s = mode_density_;
    for (;;) {
      double y;
      double envelope;
      if (rng.uniform() < 0.5) {
        y = 2.0 * rng.uniform() - 1.0;
        envelope = 1.0;
      } else {
        const double e = -std::log(rng.uniform_open());
        y = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (1.0 + e);
        envelope = std::exp(-e);
      }
      const double x = mode_ + y / s;
      if (stats != nullptr) ++stats->proposals;
      if (!(x > -kPi / 2.0 && x < kPi / 2.0)) continue;
      if (rng.uniform() * envelope * s <= density(x)) {
        if (stats != nullptr) ++stats->accepted;
        return x;
      }
    }
  }

 private:
  double p_;
  double q_;
  double log_norm_ = 0.0;
  double mode_ = 0.0;
  double mode_density_ = 0.0;
};

// ---------------------------------------------------------------------------
// lambda^(delta) on the unit circle

/// log of Gamma(1+d) Gamma(1+conj d) / Gamma(1 + d + conj d).
inline double log_lambda_normalizer(cplx delta) {
  return 2.0 * complex_log_gamma(1.0 + delta).real() -
         log_gamma_real(1.0 + 2.0 * delta.real());
}

/// (1 - z)^conj(delta) (1 - conj z)^delta = exp(2 Re(conj(delta) log(1 - z))), principal log.
inline double jacobi_weight(cplx delta, cplx z) {
  const cplx w = 1.0 - z;
  if (std::abs(w) == 0.0) {
    if (delta.real() > 0.0) return 0.0;
    if (delta.real() < 0.0) return std::numeric_limits<double>::infinity();
    return 1.0;
  }
  return std::exp(2.0 * (std::conj(delta) * std::log(w)).real());
}

/// Density of lambda^(delta) with respect to Haar measure on T, Re(delta) > -1/2.
/// At zeta = 1 it returns the limit 0 (Re delta > 0), +inf (Re delta < 0), or the
/// value with arg(1 - zeta) taken as 0 when Re delta = 0.
inline double lambda_delta_density(cplx delta, cplx zeta) {
  if (!(delta.real() > -0.5)) throw ParameterError("lambda_delta_density: need Re(delta) > -1/2");
  return std::exp(log_lambda_normalizer(delta)) * jacobi_weight(delta, zeta);
}

/// lambda_delta_density at e^{i theta}. The angle is reduced to [-pi, pi] and
/// 1 - e^{i theta} is formed from sin(theta/2), so small |theta| keeps full
/// relative precision.
inline double lambda_delta_density_at_angle(cplx delta, double theta) {
  if (!(delta.real() > -0.5)) throw ParameterError("lambda_delta_density: need Re(delta) > -1/2");
  const double t = std::remainder(theta, kTwoPi);
  if (t == 0.0) return lambda_delta_density(delta, 1.0);
  // 1 - e^{it} = 2 |sin(t/2)| e^{i (t - pi sgn t) / 2}.
  const cplx log_w{std::log(2.0 * std::abs(std::sin(t / 2.0))),
                   (t - std::copysign(kPi, t)) / 2.0};
  return std::exp(log_lambda_normalizer(delta) + 2.0 * (std::conj(delta) * log_w).real());
}

/// Envelope constant 2^(2 Re delta) exp(pi |Im delta|) bounding the Jacobi weight
/// on the closed disk.
inline double rejection_envelope(cplx delta) {
  return std::exp(2.0 * delta.real() * std::log(2.0) + kPi * std::abs(delta.imag()));
}

/// Exact draw from lambda^(delta), Re(delta) >= 0.
///
/// With zeta = e^{i theta} and phi = (theta - pi) / 2 the density becomes
/// proportional to cos(phi)^(2 Re delta) exp(2 Im delta phi), a tilted cosine law.
inline cplx sample_lambda_delta(SeededRng& rng, cplx delta) {
  if (delta.real() < 0.0) throw ParameterError("sample_lambda_delta: need Re(delta) >= 0");
  if (delta == cplx{0.0, 0.0}) return std::polar(1.0, kTwoPi * rng.uniform());
  const TiltedCosineLaw law(2.0 * delta.real(), 2.0 * delta.imag());
  const double phi = law.sample(rng);
  return std::polar(1.0, 2.0 * phi + kPi);
}

/// lambda^(delta) by rejection against the uniform law with the constant
/// rejection_envelope(delta). Its cost grows like 4^(Re delta).
inline cplx sample_lambda_delta_rejection(SeededRng& rng, cplx delta,
                                          RejectionStats* stats = nullptr) {
  if (delta.real() < 0.0) throw ParameterError("sample_lambda_delta: need Re(delta) >= 0");
  const double envelope = rejection_envelope(delta);
  for (;;) {
    const cplx zeta = std::polar(1.0, kTwoPi * rng.uniform());
    if (stats != nullptr) ++stats->proposals;
    if (rng.uniform() * envelope <= jacobi_weight(delta, zeta)) {
      if (stats != nullptr) ++stats->accepted;
      return zeta;
    }
  }
}

// ---------------------------------------------------------------------------
// Deformed coefficients gamma_k

/// log c with c = Gamma(a+1+d) Gamma(a+1+conj d) / (pi Gamma(a) Gamma(a+1+d+conj d)).
inline double log_gamma_k_normalizer(const DiskDensitySpec& spec) {
  spec.validate();
  const double a = spec.a;
  return 2.0 * complex_log_gamma(a + 1.0 + spec.delta).real() - std::log(kPi) -
         log_gamma_real(a) - log_gamma_real(a + 1.0 + 2.0 * spec.delta.real());
}

/// gamma_k_density from w = 1 - z and 1 - |z|^2 supplied separately, for
/// callers that have both without cancellation near the boundary.
inline double gamma_k_density_from(const DiskDensitySpec& spec, cplx one_minus_z,
                                   double one_minus_r2) {
  if (!(one_minus_r2 > 0.0)) throw DomainError("gamma_k_density: need |z| < 1");
  const double log_radial = (spec.a - 1.0) * std::log(one_minus_r2);
  const double log_jacobi = 2.0 * (std::conj(spec.delta) * std::log(one_minus_z)).real();
  return std::exp(log_gamma_k_normalizer(spec) + log_radial + log_jacobi);
}

/// c (1 - |z|^2)^(a-1) (1 - z)^conj(delta) (1 - conj z)^delta on the open disk.
inline double gamma_k_density(const DiskDensitySpec& spec, cplx z) {
  const double r2 = std::norm(z);
  if (!(r2 < 1.0)) throw DomainError("gamma_k_density: need |z| < 1");
  return gamma_k_density_from(spec, 1.0 - z, 1.0 - r2);
}

/// Exact draw from gamma_k_density, Re(delta) >= 0.
///
/// In the coordinates 1 - z = 2 u cos(phi) e^{i phi}, u in (0,1),
/// phi in (-pi/2, pi/2), the density factorizes: u ~ Beta(a + 2 Re delta + 1, a)
/// and phi follows the tilted cosine law with p = 2a + 2 Re delta, q = 2 Im delta.
/// delta = 0 reduces to nu_{2a+1} and is drawn directly.
inline cplx sample_gamma_k(SeededRng& rng, const DiskDensitySpec& spec) {
  spec.validate();
  if (spec.delta.real() < 0.0) throw ParameterError("sample_gamma_k: need Re(delta) >= 0");
  if (spec.delta == cplx{0.0, 0.0}) return sample_nu_s(rng, 2.0 * spec.a + 1.0);
  const double x = spec.delta.real();
  const double y = spec.delta.imag();
  const TiltedCosineLaw angle(2.0 * spec.a + 2.0 * x, 2.0 * y);
  for (;;) {
    const double u = sample_beta(rng, spec.a + 2.0 * x + 1.0, spec.a);
    const double phi = angle.sample(rng);
    const cplx z = 1.0 - 2.0 * u * std::cos(phi) * std::polar(1.0, phi);
    if (std::norm(z) < 1.0) return z;
  }
}

/// Draw from gamma_k_density by rejection: propose from nu_{2a+1} and accept
/// with probability (Jacobi weight) / rejection_envelope(delta).
inline cplx sample_gamma_k_rejection(SeededRng& rng, const DiskDensitySpec& spec,
                                     RejectionStats* stats = nullptr) {
  spec.validate();
  if (spec.delta.real() < 0.0) throw ParameterError("sample_gamma_k: need Re(delta) >= 0");
  const double envelope = rejection_envelope(spec.delta);
  for (;;) {
    const cplx z = sample_nu_s(rng, 2.0 * spec.a + 1.0);
    if (stats != nullptr) ++stats->proposals;
    if (rng.uniform() * envelope <= jacobi_weight(spec.delta, z)) {
      if (stats != nullptr) ++stats->accepted;
      return z;
    }
  }
}

/// Radial exponent a = beta' (n - k - 1) of coefficient k.
inline DiskDensitySpec coefficient_spec(const EnsembleParams& params, int k) {
  return {params.beta_prime() * static_cast<double>(params.n - k - 1), params.delta};
}

/// Independent deformed coefficients: gamma_k from gamma_k_density for k <= n-2
/// and gamma_{n-1} from lambda^(delta).
inline DeformedCoeffs sample_eta(SeededRng& rng, const EnsembleParams& params) {
  params.validate_for_sampling();
  std::vector<cplx> gammas(static_cast<std::size_t>(params.n));
  for (int k = 0; k + 1 < params.n; ++k) {
    gammas[static_cast<std::size_t>(k)] = sample_gamma_k(rng, coefficient_spec(params, k));
  }
  gammas.back() = sample_lambda_delta(rng, params.delta);
  return DeformedCoeffs(std::move(gammas));
}

}  // namespace cje
