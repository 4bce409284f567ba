#pragma once

// Unitary matrix models built from Verblunsky or deformed coefficients (GGT
// Hessenberg form, AGR product, product of reflections, CMV), their spectral
// measures, and end-to-end sampling of circular Jacobi matrices.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include "cje/errors.hpp"
#include "cje/opuc.hpp"
#include "cje/rng.hpp"
#include "cje/sampling.hpp"
#include "cje/tolerances.hpp"
#include "cje/types.hpp"

namespace cje {

using ComplexMatrix = Eigen::MatrixXcd;

/// max |(U* U - Id)_{ij}|.
inline double unitarity_defect(const ComplexMatrix& m) {
  const auto n = m.rows();
  return (m.adjoint() * m - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

/// A square matrix checked to be unitary at construction.
class DenseUnitary {
 public:
  explicit DenseUnitary(ComplexMatrix entries, double max_residual = Tolerances{}.structural,
                        double boundary_correction = 0.0)
      : entries_(std::move(entries)), boundary_correction_(boundary_correction) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
      throw ParameterError("DenseUnitary: need a non-empty square matrix");
    }
    residual_ = unitarity_defect(entries_);
    if (!(residual_ <= max_residual)) {
      throw NumericError("DenseUnitary: unitarity residual " + std::to_string(residual_) +
                         " exceeds tolerance");
    }
  }

  const ComplexMatrix& entries() const { return entries_; }
  std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }
  cplx operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  double unitarity_residual() const { return residual_; }
  /// | |c| - 1 | for the last coefficient c before it was put on the circle.
  double boundary_correction() const { return boundary_correction_; }

 private:
  ComplexMatrix entries_;
  double residual_ = 0.0;
  double boundary_correction_ = 0.0;
};

namespace detail {

// m <- m * B, where B is the identity except for the block b at rows/cols (k, k+1).
inline void right_multiply_block(ComplexMatrix& m, Eigen::Index k, const Eigen::Matrix2cd& b) {
  const Eigen::VectorXcd c0 = m.col(k);
  const Eigen::VectorXcd c1 = m.col(k + 1);
  m.col(k) = c0 * b(0, 0) + c1 * b(1, 0);
  m.col(k + 1) = c0 * b(0, 1) + c1 * b(1, 1);
}

inline Eigen::Matrix2cd theta_block(cplx alpha) {
  const double rho = std::sqrt(1.0 - std::norm(alpha));
  Eigen::Matrix2cd b;
  b << std::conj(alpha), rho, rho, -alpha;
  return b;
}

inline Eigen::Matrix2cd xi_block(cplx gamma) {
  const double rho = std::sqrt(1.0 - std::norm(gamma));
  const cplx phase = (1.0 - gamma) / (1.0 - std::conj(gamma));
  Eigen::Matrix2cd b;
  b << gamma, rho * phase, rho, -std::conj(gamma) * phase;
  return b;
}

inline std::pair<cplx, double> onto_circle(cplx c) {
  const double m = std::abs(c);
  return {c / m, std::abs(m - 1.0)};
}

// Hessenberg matrix with first-row factor -lead * conj(alpha_c); lead = -1 is
// the correct convention, any other value exists for fault injection.
inline ComplexMatrix ggt_entries(std::span<const cplx> alphas, cplx lead) {
  const auto n = static_cast<Eigen::Index>(alphas.size());
  std::vector<double> rho(alphas.size());
  for (std::size_t k = 0; k < alphas.size(); ++k) rho[k] = std::sqrt(1.0 - std::norm(alphas[k]));
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const cplx prev = r == 0 ? lead : alphas[static_cast<std::size_t>(r - 1)];
    double prod = 1.0;
    for (Eigen::Index c = r; c < n; ++c) {
      h(r, c) = -prev * std::conj(alphas[static_cast<std::size_t>(c)]) * prod;
      prod *= rho[static_cast<std::size_t>(c)];
    }
    if (r + 1 < n) h(r + 1, r) = rho[static_cast<std::size_t>(r)];
  }
  return h;
}

}  // namespace detail

/// GGT Hessenberg matrix: H_{r,c} = -alpha_{r-1} conj(alpha_c) prod_{p=r}^{c-1} rho_p
/// for r <= c (alpha_{-1} = -1), rho_c on the subdiagonal, zero below.
inline DenseUnitary ggt_from_alpha(const VerblunskyCoeffs& alphas) {
  return DenseUnitary(detail::ggt_entries(alphas.values(), cplx{-1.0, 0.0}));
}

/// Theta(alpha_0) ... Theta(alpha_{n-2}) (Id_{n-1} + conj(alpha_{n-1})).
inline DenseUnitary agr_product(const VerblunskyCoeffs& alphas) {
  const auto n = static_cast<Eigen::Index>(alphas.size());
  ComplexMatrix m = ComplexMatrix::Identity(n, n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    detail::right_multiply_block(m, k, detail::theta_block(alphas[static_cast<std::size_t>(k)]));
  }
  const auto [last, correction] = detail::onto_circle(alphas[alphas.size() - 1]);
  m.col(n - 1) *= std::conj(last);
  return DenseUnitary(std::move(m), Tolerances{}.structural, correction);
}

/// Xi(gamma_0) ... Xi(gamma_{n-2}) (Id_{n-1} + gamma_{n-1}), each Xi a reflection
/// [[g, rho e^{i phi}], [rho, -conj(g) e^{i phi}]] with e^{i phi} = (1 - g) / (1 - conj g).
inline DenseUnitary reflection_product(const DeformedCoeffs& gammas, const Tolerances& tol = {}) {
  const auto n = static_cast<Eigen::Index>(gammas.size());
  ComplexMatrix m = ComplexMatrix::Identity(n, n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const cplx g = gammas[static_cast<std::size_t>(k)];
    detail::check_not_degenerate(g, static_cast<std::size_t>(k), tol);
    detail::right_multiply_block(m, k, detail::xi_block(g));
  }
  const auto [last, correction] = detail::onto_circle(gammas[gammas.size() - 1]);
  m.col(n - 1) *= last;
  return DenseUnitary(std::move(m), tol.structural, correction);
}

/// The 2x2 reflection block of one deformed coefficient.
inline Eigen::Matrix2cd reflection_block(cplx gamma) { return detail::xi_block(gamma); }

/// CMV matrix L M with L = Theta(alpha_0) Theta(alpha_2) ..., M = Theta(alpha_1) Theta(alpha_3) ...
inline DenseUnitary cmv_from_alpha(const VerblunskyCoeffs& alphas) {
  const auto n = static_cast<Eigen::Index>(alphas.size());
  const auto [last, correction] = detail::onto_circle(alphas[alphas.size() - 1]);
  auto factor = [&](Eigen::Index parity) {
    ComplexMatrix m = ComplexMatrix::Identity(n, n);
    for (Eigen::Index k = parity; k < n; k += 2) {
      if (k + 1 < n) {
        detail::right_multiply_block(m, k, detail::theta_block(alphas[static_cast<std::size_t>(k)]));
      } else {
        m(k, k) = std::conj(last);
      }
    }
    return m;
  };
  ComplexMatrix product = factor(0) * factor(1);
  return DenseUnitary(std::move(product), Tolerances{}.structural, correction);
}

/// Eigenvalues on the circle with orthonormal eigenvectors (columns), sorted
/// by angle in [0, 2 pi), ties by first-component weight descending.
struct EigenDecomposition {
  std::vector<cplx> eigenvalues;
  ComplexMatrix eigenvectors;
  double max_residual = 0.0;

  std::vector<double> angles() const {
    std::vector<double> out;
    out.reserve(eigenvalues.size());
    for (const cplx l : eigenvalues) out.push_back(wrap_angle(std::arg(l)));
    return out;
  }
};

/// Full eigendecomposition of a unitary matrix.
///
/// A unitary matrix is normal, so its complex Schur form is diagonal up to
/// rounding and the Schur vectors are orthonormal eigenvectors.
inline EigenDecomposition eigen_unitary(const DenseUnitary& u, const Tolerances& tol = {}) {
  if (!(u.unitarity_residual() <= tol.eigen_unitarity)) {
    throw ParameterError("eigen_unitary: input is not unitary within tolerance");
  }
  const ComplexMatrix& a = u.entries();
  const auto n = a.rows();
  Eigen::ComplexSchur<ComplexMatrix> schur(n);
  schur.setMaxIterations(30 * static_cast<Eigen::Index>(n));
  schur.compute(a, true);
  if (schur.info() != Eigen::Success) {
    throw ConvergenceError("eigen_unitary: Schur iteration exceeded 30n sweeps");
  }
  const ComplexMatrix& t = schur.matrixT();
  const ComplexMatrix& q = schur.matrixU();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::vector<double> angle(static_cast<std::size_t>(n));
  std::vector<double> weight(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    angle[static_cast<std::size_t>(j)] = wrap_angle(std::arg(t(j, j)));
    weight[static_cast<std::size_t>(j)] = std::norm(q(0, j));
  }
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    const auto ux = static_cast<std::size_t>(x);
    const auto uy = static_cast<std::size_t>(y);
    if (angle[ux] != angle[uy]) return angle[ux] < angle[uy];
    return weight[ux] > weight[uy];
  });

  EigenDecomposition out;
  out.eigenvectors.resize(n, n);
  out.eigenvalues.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    const cplx lambda = t(src, src);
    if (std::abs(std::abs(lambda) - 1.0) > tol.eigen_residual) {
      throw NumericError("eigen_unitary: eigenvalue off the unit circle");
    }
    const Eigen::VectorXcd v = q.col(src);
    const double residual = (a * v - lambda * v).norm();
    out.max_residual = std::max(out.max_residual, residual);
    out.eigenvalues.push_back(lambda);
    out.eigenvectors.col(j) = v;
  }
  if (out.max_residual > tol.eigen_residual) {
    throw NumericError("eigen_unitary: eigenpair residual exceeds tolerance");
  }
  return out;
}

/// Spectral measure of U at the first basis vector: atoms at the eigenvalues,
/// weights |<e_1, v_j>|^2.
inline SpectralMeasure spectral_measure(const DenseUnitary& u, const Tolerances& tol = {}) {
  const EigenDecomposition eig = eigen_unitary(u, tol);
  const std::size_t n = eig.eigenvalues.size();
  std::vector<double> thetas = eig.angles();
  std::vector<double> weights(n);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    weights[j] = std::norm(eig.eigenvectors(0, static_cast<Eigen::Index>(j)));
    if (!(weights[j] >= tol.cyclic_weight)) {
      throw NonCyclicError("spectral_measure: first basis vector is not cyclic (weight " +
                           std::to_string(weights[j]) + ")");
    }
    total += weights[j];
  }
  if (std::abs(total - 1.0) > tol.structural) {
    throw NumericError("spectral_measure: weights do not sum to one");
  }
  for (double& w : weights) w /= total;
  return SpectralMeasure(std::move(thetas), std::move(weights), tol);
}

/// A circular Jacobi matrix: the reflection product of independent deformed
/// coefficients drawn by sample_eta.
inline DenseUnitary sample_cj_matrix(SeededRng& rng, const EnsembleParams& params) {
  return reflection_product(sample_eta(rng, params));
}

/// Spectral measure of sample_cj_matrix.
inline SpectralMeasure sample_cj_spectrum(SeededRng& rng, const EnsembleParams& params) {
  return spectral_measure(sample_cj_matrix(rng, params));
}

}  // namespace cje
