#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cje/errors.hpp"
#include "cje/tolerances.hpp"

namespace cje {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce an angle to [0, 2*pi).
inline double wrap_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Dimension, inverse temperature and the complex Jacobi parameter of the
/// circular Jacobi ensemble.
struct EnsembleParams {
  int n = 1;
  double beta = 2.0;
  cplx delta{0.0, 0.0};

  double beta_prime() const { return beta / 2.0; }

  /// Throws ParameterError unless n >= 1, beta > 0 and Re(delta) > -1/2.
  void validate() const {
    if (n < 1) throw ParameterError("ensemble dimension n must be >= 1");
    if (!(beta > 0.0) || !std::isfinite(beta)) {
      throw ParameterError("inverse temperature beta must be finite and > 0");
    }
    if (!(delta.real() > -0.5) || !std::isfinite(delta.imag())) {
      throw ParameterError("Jacobi parameter requires Re(delta) > -1/2");
    }
  }

  /// Sampling needs the stronger condition Re(delta) >= 0.
  void validate_for_sampling() const {
    validate();
    if (delta.real() < 0.0) {
      throw ParameterError("sampling requires Re(delta) >= 0");
    }
  }
};

namespace detail {

inline void validate_coefficients(std::span<const cplx> values, const char* what,
                                  const Tolerances& tol) {
  if (values.empty()) {
    throw ParameterError(std::string(what) + ": sequence must be non-empty");
  }
  const std::size_t n = values.size();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double m = std::abs(values[k]);
    if (!(m < 1.0)) {
      throw ParameterError(std::string(what) + ": coefficient " + std::to_string(k) +
                           " must lie in the open unit disk");
    }
  }
  const double last = std::abs(values[n - 1]);
  if (!(std::abs(last - 1.0) <= tol.unit_modulus)) {
    throw ParameterError(std::string(what) +
                         ": last coefficient must lie on the unit circle");
  }
}

}  // namespace detail

/// A length-n sequence with entries 0..n-2 in the open unit disk and the last
/// entry on the unit circle. `Tag` keeps Verblunsky and deformed coefficients
/// from being mixed up.
template <class Tag>
class CoefficientSequence {
 public:
  CoefficientSequence() = default;

  explicit CoefficientSequence(std::vector<cplx> values, const Tolerances& tol = {})
      : values_(std::move(values)) {
    detail::validate_coefficients(values_, Tag::name, tol);
  }

  std::size_t size() const { return values_.size(); }
  const cplx& operator[](std::size_t k) const { return values_[k]; }
  std::span<const cplx> values() const { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  friend bool operator==(const CoefficientSequence&, const CoefficientSequence&) = default;

 private:
  std::vector<cplx> values_;
};

struct VerblunskyTag {
  static constexpr const char* name = "VerblunskyCoeffs";
};
struct DeformedTag {
  static constexpr const char* name = "DeformedCoeffs";
};

using VerblunskyCoeffs = CoefficientSequence<VerblunskyTag>;
using DeformedCoeffs = CoefficientSequence<DeformedTag>;

/// Finitely supported probability measure on the unit circle:
/// atoms exp(i theta_j) with positive weights summing to one.
class SpectralMeasure {
 public:
  SpectralMeasure() = default;

  SpectralMeasure(std::vector<double> thetas, std::vector<double> weights,
                  const Tolerances& tol = {})
      : thetas_(std::move(thetas)), weights_(std::move(weights)) {
    if (thetas_.empty() || thetas_.size() != weights_.size()) {
      throw ParameterError("SpectralMeasure: need as many weights as atoms (>= 1)");
    }
    double total = 0.0;
    for (std::size_t j = 0; j < thetas_.size(); ++j) {
      if (!(weights_[j] > 0.0)) {
        throw ParameterError("SpectralMeasure: weights must be positive");
      }
      if (!std::isfinite(thetas_[j])) {
        throw ParameterError("SpectralMeasure: angles must be finite");
      }
      thetas_[j] = wrap_angle(thetas_[j]);
      total += weights_[j];
    }
    if (std::abs(total - 1.0) > tol.structural) {
      throw ParameterError("SpectralMeasure: weights must sum to 1");
    }
  }

  std::size_t size() const { return thetas_.size(); }
  std::span<const double> thetas() const { return thetas_; }
  std::span<const double> weights() const { return weights_; }
  cplx atom(std::size_t j) const { return std::polar(1.0, thetas_[j]); }

 private:
  std::vector<double> thetas_;
  std::vector<double> weights_;
};

/// Coefficient vectors (ascending powers) of a monic polynomial Phi_k and its
/// reversed polynomial Phi_k^*(z) = z^k conj(Phi_k(1 / conj z)).
struct MonicPolyPair {
  std::vector<cplx> phi{cplx{1.0, 0.0}};
  std::vector<cplx> phi_star{cplx{1.0, 0.0}};

  std::size_t degree() const { return phi.size() - 1; }

  static MonicPolyPair one() { return {}; }
};

/// Horner evaluation of an ascending coefficient vector.
inline cplx evaluate_polynomial(std::span<const cplx> coeffs, cplx z) {
  cplx acc{0.0, 0.0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

}  // namespace cje
