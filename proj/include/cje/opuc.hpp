#pragma once

// Orthogonal polynomials on the unit circle: Szego recursion, the bijection
// between Verblunsky coefficients and deformed coefficients, the functions
// gamma_k(z), and the transforms between finitely supported measures and
// their coefficients.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cje/errors.hpp"
#include "cje/tolerances.hpp"
#include "cje/types.hpp"

namespace cje {

/// One step of the Szego recursion on coefficient vectors:
/// Phi_{k+1}(z) = z Phi_k(z) - conj(alpha) Phi_k^*(z).
inline MonicPolyPair szego_step(const MonicPolyPair& pair, cplx alpha) {
  if (std::abs(alpha) > 1.0) throw ParameterError("szego_step: |alpha| must be <= 1");
  const std::size_t k = pair.degree();
  MonicPolyPair next;
  next.phi.assign(k + 2, cplx{0.0, 0.0});
  for (std::size_t i = 0; i <= k; ++i) next.phi[i + 1] += pair.phi[i];
  const cplx alpha_bar = std::conj(alpha);
  for (std::size_t i = 0; i <= k; ++i) next.phi[i] -= alpha_bar * pair.phi_star[i];
  next.phi[k + 1] = cplx{1.0, 0.0};
  next.phi_star.resize(k + 2);
  for (std::size_t i = 0; i <= k + 1; ++i) next.phi_star[i] = std::conj(next.phi[k + 1 - i]);
  return next;
}

/// Coefficient vectors of Phi_0 .. Phi_n for the given Verblunsky sequence.
inline std::vector<MonicPolyPair> szego_polynomials(std::span<const cplx> alphas) {
  std::vector<MonicPolyPair> out;
  out.reserve(alphas.size() + 1);
  out.push_back(MonicPolyPair::one());
  for (const cplx a : alphas) out.push_back(szego_step(out.back(), a));
  return out;
}

/// Values (Phi_k(z), Phi_k^*(z)) for k = 0..n by the pointwise recursion
/// Phi_{k+1} = z Phi_k - conj(a_k) Phi_k^*, Phi_{k+1}^* = Phi_k^* - a_k z Phi_k.
inline std::vector<std::pair<cplx, cplx>> szego_values(std::span<const cplx> alphas, cplx z) {
  std::vector<std::pair<cplx, cplx>> out;
  out.reserve(alphas.size() + 1);
  cplx phi{1.0, 0.0};
  cplx phi_star{1.0, 0.0};
  out.emplace_back(phi, phi_star);
  for (const cplx a : alphas) {
    const cplx next = z * phi - std::conj(a) * phi_star;
    const cplx next_star = phi_star - a * z * phi;
    phi = next;
    phi_star = next_star;
    out.emplace_back(phi, phi_star);
  }
  return out;
}

namespace detail {

inline void check_not_degenerate(cplx g, std::size_t j, const Tolerances& tol) {
  if (std::abs(1.0 - g) <= tol.degenerate) {
    throw DegenerateError("deformed coefficient " + std::to_string(j) +
                          " equals 1; the phase factor is undefined");
  }
}

// (1 - conj g) / (1 - g), a unit-modulus phase.
inline cplx reflection_phase(cplx g) { return (1.0 - std::conj(g)) / (1.0 - g); }

}  // namespace detail

/// gamma_0 = conj(alpha_0), gamma_k = conj(alpha_k) * prod_{j<k} (1 - conj g_j) / (1 - g_j).
inline DeformedCoeffs gamma_from_alpha(const VerblunskyCoeffs& alphas, const Tolerances& tol = {}) {
  const std::size_t n = alphas.size();
  std::vector<cplx> gammas(n);
  cplx phase{1.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    gammas[k] = std::conj(alphas[k]) * phase;
    if (k + 1 < n) {
      detail::check_not_degenerate(gammas[k], k, tol);
      phase *= detail::reflection_phase(gammas[k]);
      phase /= std::abs(phase);
    }
  }
  return DeformedCoeffs(std::move(gammas), tol);
}

/// Inverse of gamma_from_alpha: alpha_k = conj(gamma_k) * prod_{j<k} (1 - conj g_j) / (1 - g_j).
inline VerblunskyCoeffs alpha_from_gamma(const DeformedCoeffs& gammas, const Tolerances& tol = {}) {
  const std::size_t n = gammas.size();
  std::vector<cplx> alphas(n);
  cplx phase{1.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    alphas[k] = std::conj(gammas[k]) * phase;
    if (k + 1 < n) {
      detail::check_not_degenerate(gammas[k], k, tol);
      phase *= detail::reflection_phase(gammas[k]);
      phase /= std::abs(phase);
    }
  }
  return VerblunskyCoeffs(std::move(alphas), tol);
}

/// (gamma_0(z), ..., gamma_{n-1}(z)) with gamma_k(z) = z - Phi_{k+1}(z) / Phi_k(z).
inline std::vector<cplx> gamma_functions_at(const VerblunskyCoeffs& alphas, cplx z,
                                            const Tolerances& tol = {}) {
  const auto values = szego_values(alphas.values(), z);
  std::vector<cplx> out(alphas.size());
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const cplx phi_k = values[k].first;
    if (std::abs(phi_k) < tol.pole) {
      throw PoleError("gamma_functions_at: Phi_" + std::to_string(k) + "(z) vanishes");
    }
    out[k] = z - values[k + 1].first / phi_k;
  }
  return out;
}

/// det(Id - U) = prod_k (1 - gamma_k) for the matrix built from `gammas`.
inline cplx char_poly_at_one(const DeformedCoeffs& gammas) {
  cplx prod{1.0, 0.0};
  for (const cplx g : gammas) prod *= 1.0 - g;
  return prod;
}

/// Multiply alpha_k by exp(-i (k+1) xi): the coefficients of the measure
/// rotated by xi.
inline VerblunskyCoeffs rotate_coefficients(const VerblunskyCoeffs& alphas, double xi) {
  std::vector<cplx> out(alphas.size());
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    out[k] = alphas[k] * std::polar(1.0, -static_cast<double>(k + 1) * xi);
  }
  return VerblunskyCoeffs(std::move(out));
}

/// First `count` Verblunsky coefficients of a finitely supported measure.
///
/// Arnoldi process for multiplication by z on the atom values, weighted by the
/// masses, with one full reorthogonalization pass. The projection of z Phi_k
/// on the constants equals conj(alpha_k) ||Phi_k||^2, which gives alpha_k
/// without forming monomial coefficients. With count == size() the last
/// coefficient is renormalized onto the unit circle.
inline std::vector<cplx> leading_verblunsky(const SpectralMeasure& measure, std::size_t count,
                                            const Tolerances& tol = {}) {
  const std::size_t n = measure.size();
  if (count > n) throw ParameterError("leading_verblunsky: count exceeds number of atoms");
  const auto weights = measure.weights();
  std::vector<cplx> atoms(n);
  for (std::size_t j = 0; j < n; ++j) atoms[j] = measure.atom(j);

  auto inner = [&](const std::vector<cplx>& f, const std::vector<cplx>& g) {
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) acc += weights[j] * std::conj(f[j]) * g[j];
    return acc;
  };

  std::vector<std::vector<cplx>> basis;
  std::vector<double> norms2;
  basis.emplace_back(n, cplx{1.0, 0.0});
  norms2.push_back(inner(basis[0], basis[0]).real());

  std::vector<cplx> alphas(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<cplx> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = atoms[j] * basis[k][j];
    cplx h0{0.0, 0.0};
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i <= k; ++i) {
        const cplx c = inner(basis[i], v) / norms2[i];
        for (std::size_t j = 0; j < n; ++j) v[j] -= c * basis[i][j];
        if (i == 0) h0 += c;
      }
    }
    alphas[k] = std::conj(h0 / norms2[k]);
    if (k + 1 < n) {
      const double nv = inner(v, v).real();
      if (!(nv > 0.0) || 1.0 / nv > tol.gram_condition) {
        throw NumericError("verblunsky_from_measure: Gram conditioning exceeds limit "
                           "(nearly coincident atoms)");
      }
      basis.push_back(std::move(v));
      norms2.push_back(nv);
    }
  }
  if (count == n) {
    const double m = std::abs(alphas[n - 1]);
    if (std::abs(m - 1.0) > 1e-6) {
      throw NumericError("verblunsky_from_measure: last coefficient drifted off the circle");
    }
    alphas[n - 1] /= m;
  } else {
    for (const cplx a : alphas) {
      if (!(std::abs(a) < 1.0)) {
        throw NumericError("leading_verblunsky: coefficient left the unit disk");
      }
    }
  }
  return alphas;
}

/// All n Verblunsky coefficients of an n-atom measure.
inline VerblunskyCoeffs verblunsky_from_measure(const SpectralMeasure& measure,
                                                const Tolerances& tol = {}) {
  return VerblunskyCoeffs(leading_verblunsky(measure, measure.size(), tol), tol);
}

/// Caratheodory function F and Schur function f of a measure at |z| < 1.
struct CaratheodorySchur {
  cplx caratheodory;
  cplx schur;
};

/// F(z) = sum_j pi_j (zeta_j + z) / (zeta_j - z) and f(z) = (F - 1) / (z (F + 1)).
///
/// With S = sum_j pi_j / (zeta_j - z) one has F - 1 = 2 z S, hence
/// f = S / (1 + z S), which is regular at z = 0 where f(0) = alpha_0.
inline CaratheodorySchur caratheodory_schur(const SpectralMeasure& measure, cplx z) {
  if (!(std::abs(z) < 1.0)) throw DomainError("caratheodory_schur: need |z| < 1");
  cplx s{0.0, 0.0};
  const auto weights = measure.weights();
  for (std::size_t j = 0; j < measure.size(); ++j) {
    const cplx diff = measure.atom(j) - z;
    if (std::abs(diff) == 0.0) throw PoleError("caratheodory_schur: z is an atom");
    s += weights[j] / diff;
  }
  return {1.0 + 2.0 * z * s, s / (1.0 + z * s)};
}

/// Christoffel weights 1 / sum_{k<n} |phi_k(e^{i theta})|^2 with phi_k the
/// orthonormal polynomials of the coefficients `alphas`.
inline std::vector<double> christoffel_weights(const VerblunskyCoeffs& alphas,
                                               std::span<const double> thetas) {
  const std::size_t n = alphas.size();
  std::vector<double> norms2(n, 1.0);
  for (std::size_t k = 1; k < n; ++k) {
    norms2[k] = norms2[k - 1] * (1.0 - std::norm(alphas[k - 1]));
  }
  std::vector<double> out;
  out.reserve(thetas.size());
  for (const double theta : thetas) {
    const auto values = szego_values(alphas.values().first(n - 1), std::polar(1.0, theta));
    double kernel = 0.0;
    for (std::size_t k = 0; k < n; ++k) kernel += std::norm(values[k].first) / norms2[k];
    out.push_back(1.0 / kernel);
  }
  return out;
}

}  // namespace cje
