#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "cje/errors.hpp"
#include "cje/types.hpp"

namespace cje {

namespace detail {

// Lanczos approximation, g = 7, nine terms.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993227684700473478,  676.520368121885098567009190444019,
    -1259.13921672240287047156078755283, 771.3234287776530788486528258894,
    -176.61502916214059906584551354,     12.507343278686904814458936853,
    -0.13857109526572011689554707,       9.984369578019570859563e-6,
    1.50563273514931155834e-7};

inline cplx lanczos_log_gamma(cplx z) {
  // Valid for Re z >= 1/2; Gamma(z) = sqrt(2 pi) t^(z - 1/2) e^(-t) A(z).
  const cplx zm1 = z - 1.0;
  cplx series{kLanczosCoeffs[0], 0.0};
  for (std::size_t k = 1; k < kLanczosCoeffs.size(); ++k) {
    series += kLanczosCoeffs[k] / (zm1 + static_cast<double>(k));
  }
  const cplx t = zm1 + kLanczosG + 0.5;
  return 0.5 * std::log(kTwoPi) + (zm1 + 0.5) * std::log(t) - t + std::log(series);
}

}  // namespace detail

/// Principal branch of log Gamma(z), analytic on C minus (-inf, 0].
///
/// Re z >= 1/2 uses the Lanczos form directly; smaller real parts are shifted
/// up with Gamma(z) = Gamma(z + m) / (z (z+1) ... (z+m-1)). Each log(z + k) has
/// its cut inside (-inf, 0], so the result stays on the principal branch.
inline cplx complex_log_gamma(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw ParameterError("complex_log_gamma: non-finite argument");
  }
  if (z.imag() == 0.0 && z.real() <= 0.0 && std::floor(z.real()) == z.real()) {
    throw PoleError("complex_log_gamma: pole at a non-positive integer");
  }
  if (z.real() >= 0.5) return detail::lanczos_log_gamma(z);

  const double shift = std::ceil(0.5 - z.real());
  if (shift > 1e6) {
    throw ParameterError("complex_log_gamma: real part too negative");
  }
  const int m = static_cast<int>(shift);
  cplx correction{0.0, 0.0};
  for (int k = 0; k < m; ++k) correction += std::log(z + static_cast<double>(k));
  return detail::lanczos_log_gamma(z + static_cast<double>(m)) - correction;
}

/// log|Gamma(x)| for real x, through the complex routine.
inline double log_gamma_real(double x) { return complex_log_gamma(cplx{x, 0.0}).real(); }

}  // namespace cje
