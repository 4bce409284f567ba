#include <gtest/gtest.h>

#include <Eigen/SVD>
#include <algorithm>
#include <random>

#include "cje/matrix_models.hpp"
#include "cje/stats.hpp"
#include "test_util.hpp"

using cje::cplx;
using cje::ComplexMatrix;
using cje::testing::random_coefficients;

namespace {

double max_diff(const cje::DenseUnitary& a, const cje::DenseUnitary& b) {
  return (a.entries() - b.entries()).cwiseAbs().maxCoeff();
}

std::vector<double> sorted_angles(const cje::DenseUnitary& u) {
  auto a = cje::eigen_unitary(u).angles();
  std::sort(a.begin(), a.end());
  return a;
}

// Circular distance between two sorted angle lists.
double angle_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(std::remainder(a[i] - b[i], 2 * M_PI));
    m = std::max(m, d);
  }
  return m;
}

}  // namespace

TEST(Ggt, SmallCases) {
  const cje::VerblunskyCoeffs shift({0.0, 1.0});
  const auto u = cje::ggt_from_alpha(shift);
  EXPECT_LT(std::abs(u(0, 0)), 1e-15);
  EXPECT_LT(std::abs(u(0, 1) - 1.0), 1e-15);
  EXPECT_LT(std::abs(u(1, 0) - 1.0), 1e-15);
  EXPECT_LT(std::abs(u(1, 1)), 1e-15);

  const cplx a0{0.3, -0.4};
  const cplx a1 = std::polar(1.0, 0.9);
  const double rho0 = std::sqrt(1.0 - std::norm(a0));
  const auto g = cje::ggt_from_alpha(cje::VerblunskyCoeffs({a0, a1}));
  EXPECT_LT(std::abs(g(0, 0) - std::conj(a0)), 1e-15);
  EXPECT_LT(std::abs(g(0, 1) - rho0 * std::conj(a1)), 1e-15);
  EXPECT_LT(std::abs(g(1, 0) - rho0), 1e-15);
  EXPECT_LT(std::abs(g(1, 1) + a0 * std::conj(a1)), 1e-15);
}

TEST(Agr, SingleAndShift) {
  const cplx e = std::polar(1.0, 0.4);
  const auto one = cje::agr_product(cje::VerblunskyCoeffs({e}));
  EXPECT_LT(std::abs(one(0, 0) - std::conj(e)), 1e-15);

  const auto shift = cje::agr_product(cje::VerblunskyCoeffs({0.0, 0.0, 0.0, 1.0}));
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const double expected = (i == j + 1 || (i == 0 && j == 3)) ? 1.0 : 0.0;
      EXPECT_NEAR(std::abs(shift(i, j)), expected, 1e-15);
    }
  }
}

TEST(ThreeModels, AgreeEntrywise) {
  std::mt19937_64 gen(31);
  for (const std::size_t n : {1u, 2u, 3u, 6u, 17u, 64u}) {
    for (int trial = 0; trial < 10; ++trial) {
      const cje::VerblunskyCoeffs a(random_coefficients(gen, n));
      const auto ggt = cje::ggt_from_alpha(a);
      const auto agr = cje::agr_product(a);
      const auto xi = cje::reflection_product(cje::gamma_from_alpha(a));
      EXPECT_LT(max_diff(ggt, agr), 1e-12) << n;
      EXPECT_LT(max_diff(ggt, xi), 1e-10) << n;
      EXPECT_LE(ggt.unitarity_residual(), 1e-10);
      EXPECT_LE(xi.unitarity_residual(), 1e-10);
    }
  }
}

TEST(Reflection, BlocksAreRankOneReflections) {
  const auto zero = cje::reflection_block(0.0);
  EXPECT_LT(std::abs(zero(0, 1) - 1.0) + std::abs(zero(1, 0) - 1.0) + std::abs(zero(0, 0)) +
                std::abs(zero(1, 1)),
            1e-15);
  std::mt19937_64 gen(32);
  for (const cplx g : random_coefficients(gen, 20)) {
    if (std::abs(g) >= 1.0) continue;
    const Eigen::Matrix2cd r = cje::reflection_block(g);
    const Eigen::JacobiSVD<Eigen::Matrix2cd> svd(r - Eigen::Matrix2cd::Identity());
    EXPECT_LT(svd.singularValues()(1), 1e-10);
    // Eigenvalues 1 and -e^{i phi}.
    const cplx phase = (1.0 - g) / (1.0 - std::conj(g));
    EXPECT_LT(std::abs(r.determinant() + phase), 1e-13);
  }
}

TEST(Reflection, DegenerateInputThrows) {
  EXPECT_THROW(cje::reflection_product(cje::DeformedCoeffs({cplx(1.0 - 1e-16), 1.0})),
               cje::DegenerateError);
}

TEST(Cmv, PentadiagonalAndSameSpectrum) {
  std::mt19937_64 gen(33);
  const cje::VerblunskyCoeffs two(random_coefficients(gen, 2));
  EXPECT_LT(max_diff(cje::cmv_from_alpha(two), cje::ggt_from_alpha(two)), 1e-14);

  const cje::VerblunskyCoeffs a16(random_coefficients(gen, 16));
  const auto c = cje::cmv_from_alpha(a16);
  double outside = 0.0;
  for (std::size_t i = 0; i < 16; ++i) {
    for (std::size_t j = 0; j < 16; ++j) {
      if (std::abs(static_cast<int>(i) - static_cast<int>(j)) > 2) {
        outside = std::max(outside, std::abs(c(i, j)));
      }
    }
  }
  EXPECT_LE(outside, 1e-14);

  const cje::VerblunskyCoeffs a8(random_coefficients(gen, 8));
  EXPECT_LT(angle_gap(sorted_angles(cje::cmv_from_alpha(a8)), sorted_angles(cje::ggt_from_alpha(a8))),
            1e-9);
}

TEST(Eigen, IdentityAndSwap) {
  const auto id = cje::eigen_unitary(cje::DenseUnitary(ComplexMatrix::Identity(3, 3)));
  for (const cplx l : id.eigenvalues) EXPECT_LT(std::abs(l - 1.0), 1e-15);

  ComplexMatrix swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  const auto e = cje::eigen_unitary(cje::DenseUnitary(swap));
  EXPECT_LT(std::abs(e.eigenvalues[0] - 1.0), 1e-14);
  EXPECT_LT(std::abs(e.eigenvalues[1] + 1.0), 1e-14);
}

TEST(Eigen, CharacteristicPolynomialAtOne) {
  std::mt19937_64 gen(34);
  for (int trial = 0; trial < 10; ++trial) {
    const cje::DeformedCoeffs g(random_coefficients(gen, 32));
    const auto eig = cje::eigen_unitary(cje::reflection_product(g));
    cplx det{1.0, 0.0};
    for (const cplx l : eig.eigenvalues) det *= 1.0 - l;
    const cplx expected = cje::char_poly_at_one(g);
    EXPECT_LT(std::abs(det - expected), 1e-8 * std::abs(expected));
  }
}

TEST(SpectralMeasure, SmallCases) {
  const auto one = cje::spectral_measure(cje::DenseUnitary(ComplexMatrix::Constant(1, 1, std::polar(1.0, 2.0))));
  EXPECT_NEAR(one.thetas()[0], 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(one.weights()[0], 1.0);

  const auto pair = cje::spectral_measure(cje::ggt_from_alpha(cje::VerblunskyCoeffs({0.0, 1.0})));
  EXPECT_NEAR(pair.thetas()[0], 0.0, 1e-14);
  EXPECT_NEAR(pair.thetas()[1], M_PI, 1e-14);
  EXPECT_NEAR(pair.weights()[0], 0.5, 1e-14);
  EXPECT_NEAR(pair.weights()[1], 0.5, 1e-14);
}

TEST(SpectralMeasure, NonCyclicVectorThrows) {
  ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
  diag(0, 0) = 1.0;
  diag(1, 1) = -1.0;
  EXPECT_THROW(cje::spectral_measure(cje::DenseUnitary(diag)), cje::NonCyclicError);
}

TEST(SpectralMeasure, RoundTripWithCoefficients) {
  std::mt19937_64 gen(35);
  for (const std::size_t n : {1u, 2u, 4u, 9u, 16u}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto raw = random_coefficients(gen, n, 0.9);
      const auto measure = cje::spectral_measure(cje::ggt_from_alpha(cje::VerblunskyCoeffs(raw)));
      const auto back = cje::verblunsky_from_measure(measure);
      EXPECT_LT(cje::testing::max_abs_diff({back.begin(), back.end()}, raw), 1e-8) << n;
      // Christoffel weights, independent of the eigenvectors.
      const auto w = cje::christoffel_weights(cje::VerblunskyCoeffs(raw), measure.thetas());
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_NEAR(w[j], measure.weights()[j], 1e-6 * measure.weights()[j]);
      }
    }
  }
}

TEST(SpectralMeasure, RotationCovariance) {
  std::mt19937_64 gen(36);
  const auto raw = random_coefficients(gen, 7, 0.9);
  const cje::VerblunskyCoeffs a(raw);
  const double xi = 0.6;
  auto base = sorted_angles(cje::ggt_from_alpha(a));
  auto rotated = sorted_angles(cje::ggt_from_alpha(cje::rotate_coefficients(a, xi)));
  for (double& t : base) t = cje::wrap_angle(t + xi);
  std::sort(base.begin(), base.end());
  EXPECT_LT(angle_gap(base, rotated), 1e-10);
}

TEST(SampleMatrix, UnitaryAndBoundaryCorrectionRecorded) {
  cje::SeededRng rng(37);
  const auto u = cje::sample_cj_matrix(rng, {12, 2.0, {1.0, 0.5}});
  EXPECT_LE(u.unitarity_residual(), 1e-10);
  EXPECT_LE(u.boundary_correction(), 1e-12);
  const auto m = cje::sample_cj_spectrum(rng, {12, 2.0, {1.0, 0.5}});
  EXPECT_EQ(m.size(), 12u);
}

TEST(SampleMatrix, ThetaAndXiProductsAgreeInLawAtZeroDelta) {
  // With delta = 0 the deformed coefficients have the same law as the
  // Verblunsky coefficients, so both products give the same spectral law.
  const cje::EnsembleParams p{5, 2.0, 0.0};
  cje::SeededRng rng(38);
  constexpr int kSamples = 20000;
  std::vector<double> c1a(kSamples), c1b(kSamples), c2a(kSamples), c2b(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    const auto eta = cje::sample_eta(rng, p);
    const std::vector<cplx> vals(eta.begin(), eta.end());
    const auto ta = cje::eigen_unitary(cje::agr_product(cje::VerblunskyCoeffs(vals))).angles();
    const auto tb = cje::eigen_unitary(cje::reflection_product(eta)).angles();
    double s1a = 0, s1b = 0, s2a = 0, s2b = 0;
    for (std::size_t j = 0; j < ta.size(); ++j) {
      s1a += std::cos(ta[j]);
      s2a += std::cos(2 * ta[j]);
      s1b += std::cos(tb[j]);
      s2b += std::cos(2 * tb[j]);
    }
    const auto k = static_cast<std::size_t>(i);
    c1a[k] = s1a, c1b[k] = s1b, c2a[k] = s2a, c2b[k] = s2b;
  }
  const auto m1a = cje::mean_stat(c1a), m1b = cje::mean_stat(c1b);
  const auto m2a = cje::mean_stat(c2a), m2b = cje::mean_stat(c2b);
  EXPECT_LT(std::abs(m1a.mean - m1b.mean), 3.0 * std::hypot(m1a.std_error, m1b.std_error));
  EXPECT_LT(std::abs(m2a.mean - m2b.mean), 3.0 * std::hypot(m2a.std_error, m2b.std_error));
}
