#pragma once

// Verification suites run by `cje_cli verify`: deterministic identities
// (factorizations, bijections, closed forms against quadrature) and seeded
// statistical goodness-of-fit checks at significance 0.001.

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cje/analysis.hpp"
#include "cje/harness/config.hpp"
#include "cje/harness/manifest.hpp"
#include "cje/harness/parallel.hpp"
#include "cje/matrix_models.hpp"
#include "cje/opuc.hpp"
#include "cje/quadrature.hpp"
#include "cje/sampling.hpp"
#include "cje/stats.hpp"

namespace cje::harness {

/// Per-test significance of the statistical suites.
inline constexpr double kSignificance = 1e-3;
/// Two-sided normal quantile at kSignificance.
inline constexpr double kZCritical = 3.2905267314919255;

/// n - 1 points uniform in the disk of radius `radius`, last point on the circle.
inline VerblunskyCoeffs random_verblunsky(SeededRng& rng, std::size_t n, double radius = 0.95) {
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    out[k] = std::polar(radius * std::sqrt(rng.uniform()), kTwoPi * rng.uniform());
  }
  out[n - 1] = std::polar(1.0, kTwoPi * rng.uniform());
  return VerblunskyCoeffs(std::move(out));
}

/// GGT matrix; with `fault` the leading sign is flipped (test hook for the
/// sentinel run that must make the factorization check fail).
inline ComplexMatrix ggt_matrix(const VerblunskyCoeffs& alphas, bool fault) {
  return fault ? cje::detail::ggt_entries(alphas.values(), cplx{1.0, 0.0})
               : ggt_from_alpha(alphas).entries();
}

/// max entrywise gap between GGT, AGR and the reflection product of the deformed coefficients.
inline double factorization_defect(const VerblunskyCoeffs& alphas, bool fault = false) {
  const ComplexMatrix g = ggt_matrix(alphas, fault);
  const ComplexMatrix a = agr_product(alphas).entries();
  const ComplexMatrix r = reflection_product(gamma_from_alpha(alphas)).entries();
  return std::max((g - a).cwiseAbs().maxCoeff(), (g - r).cwiseAbs().maxCoeff());
}

/// Relative gap between det(Id - U) from the eigenvalues of the reflection
/// product and prod (1 - gamma_k).
inline double char_poly_defect(const DeformedCoeffs& gammas) {
  const EigenDecomposition eig = eigen_unitary(reflection_product(gammas));
  cplx det{1.0, 0.0};
  for (const cplx l : eig.eigenvalues) det *= 1.0 - l;
  const cplx expected = char_poly_at_one(gammas);
  return std::abs(det - expected) / std::abs(expected);
}

/// Polar binning of the disk with radial edges in |z|^2 and equal sectors.
struct DiskBinning {
  std::vector<double> r2_edges;
  int sectors = 12;

  std::size_t count() const { return (r2_edges.size() - 1) * static_cast<std::size_t>(sectors); }

  std::size_t index(cplx z) const {
    const double r2 = std::norm(z);
    const auto it = std::upper_bound(r2_edges.begin() + 1, r2_edges.end() - 1, r2);
    const auto ri = static_cast<std::size_t>(it - r2_edges.begin() - 1);
    auto si = static_cast<std::size_t>(wrap_angle(std::arg(z)) / kTwoPi * sectors);
    si = std::min(si, static_cast<std::size_t>(sectors - 1));
    return ri * static_cast<std::size_t>(sectors) + si;
  }

  /// Bin probabilities by tensor Gauss-Legendre in (|z|^2, arg z).
  std::vector<double> probabilities(const std::function<double(cplx)>& density,
                                    std::size_t order = 12) const {
    const QuadratureRule gl = gauss_legendre(order);
    std::vector<double> out(count(), 0.0);
    for (std::size_t ri = 0; ri + 1 < r2_edges.size(); ++ri) {
      const double a = r2_edges[ri];
      const double b = r2_edges[ri + 1];
      for (int si = 0; si < sectors; ++si) {
        const double p0 = kTwoPi * si / sectors;
        const double p1 = kTwoPi * (si + 1) / sectors;
        double acc = 0.0;
        for (std::size_t i = 0; i < order; ++i) {
          const double r2 = a + (b - a) * (gl.nodes[i] + 1.0) / 2.0;
          for (std::size_t j = 0; j < order; ++j) {
            const double psi = p0 + (p1 - p0) * (gl.nodes[j] + 1.0) / 2.0;
            acc += gl.weights[i] * gl.weights[j] * density(std::polar(std::sqrt(r2), psi));
          }
        }
        // d^2 z = (1/2) d(|z|^2) d(arg z)
        out[ri * static_cast<std::size_t>(sectors) + static_cast<std::size_t>(si)] =
            acc * (b - a) / 2.0 * (p1 - p0) / 2.0 / 2.0;
      }
    }
    return out;
  }

  /// Rings of equal mass when |z|^2 ~ Beta(1, a).
  static DiskBinning for_radial_exponent(double a, int rings, int sectors) {
    DiskBinning b;
    b.sectors = sectors;
    b.r2_edges.push_back(0.0);
    for (int i = 1; i < rings; ++i) {
      b.r2_edges.push_back(1.0 - std::pow(1.0 - static_cast<double>(i) / rings, 1.0 / std::max(a, 1.0)));
    }
    b.r2_edges.push_back(1.0);
    return b;
  }
};

/// Cell probabilities of the ordered eigenangle pair (theta_1 < theta_2) of the
/// n = 2 ensemble on a K x K grid of [0, 2 pi)^2, cells (i <= j) in row order.
/// The joint density prod_j w(theta_j) |e^{i theta_1} - e^{i theta_2}|^beta is
/// integrated cell by cell and normalized numerically.
inline std::vector<double> pair_cell_probabilities(double beta, cplx delta, int k,
                                                   std::size_t order = 8) {
  const QuadratureRule gl = gauss_legendre(order);
  const double h = kTwoPi / k;
  std::vector<std::vector<double>> nodes(static_cast<std::size_t>(k));
  std::vector<std::vector<double>> weights(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    for (std::size_t q = 0; q < order; ++q) {
      const double t = h * i + h * (gl.nodes[q] + 1.0) / 2.0;
      nodes[static_cast<std::size_t>(i)].push_back(t);
      weights[static_cast<std::size_t>(i)].push_back(gl.weights[q] * h / 2.0 *
                                                     lambda_delta_density_at_angle(delta, t));
    }
  }
  std::vector<double> out;
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      double acc = 0.0;
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      for (std::size_t p = 0; p < order; ++p) {
        for (std::size_t q = 0; q < order; ++q) {
          const double gap = std::abs(2.0 * std::sin((nodes[ui][p] - nodes[uj][q]) / 2.0));
          acc += weights[ui][p] * weights[uj][q] * std::pow(gap, beta);
        }
      }
      // Off-diagonal cells collect both orderings of the unordered pair.
      if (i != j) acc *= 2.0;
      out.push_back(acc);
      total += acc;
    }
  }
  for (double& p : out) p /= total;
  return out;
}

/// Index of the cell holding the ordered pair t1 <= t2 (angles in [0, 2 pi)).
inline std::size_t pair_cell_index(double t1, double t2, int k) {
  auto bin = [k](double t) { return std::min(k - 1, static_cast<int>(t / kTwoPi * k)); };
  const int i = std::min(bin(t1), bin(t2));
  const int j = std::max(bin(t1), bin(t2));
  // Cells before row i: sum_{r < i} (k - r).
  return static_cast<std::size_t>(i * k - i * (i - 1) / 2 + (j - i));
}

namespace detail {

inline CheckResult at_most(std::string name, std::string anchor, double stat, double threshold) {
  CheckResult c{std::move(name), std::move(anchor), stat <= threshold, stat, threshold, ""};
  return c;
}

inline CheckResult p_value_check(std::string name, std::string anchor, const ChiSquareResult& r) {
  CheckResult c{std::move(name), std::move(anchor), r.p_value > kSignificance, r.p_value,
                kSignificance, ""};
  c.detail = "chi2=" + std::to_string(r.statistic) + " dof=" + std::to_string(r.dof);
  return c;
}

inline CheckResult z_check(std::string name, std::string anchor, const MeanStat& m, double target) {
  const double z = m.z_score(target);
  CheckResult c{std::move(name), std::move(anchor), z <= kZCritical, z, kZCritical, ""};
  c.detail = "mean=" + std::to_string(m.mean) + " target=" + std::to_string(target) +
             " se=" + std::to_string(m.std_error);
  return c;
}

}  // namespace detail

/// Identities that hold up to rounding; no randomness beyond a fixed corpus.
inline std::vector<CheckResult> deterministic_suite(const ExperimentConfig& cfg) {
  const bool fault = cfg.inject_fault == "ggt-sign";
  std::vector<CheckResult> out;
  SeededRng corpus_rng(20240601, 0);
  std::vector<VerblunskyCoeffs> corpus;
  for (int rep = 0; rep < 10; ++rep) {
    for (const std::size_t n : {2, 4, 8, 16, 32}) corpus.push_back(random_verblunsky(corpus_rng, n));
  }

  double fact = 0.0;
  double cmv = 0.0;
  double round_trip = 0.0;
  double det = 0.0;
  double measure = 0.0;
  for (const auto& alphas : corpus) {
    fact = std::max(fact, factorization_defect(alphas, fault));
    const DeformedCoeffs gammas = gamma_from_alpha(alphas);
    const VerblunskyCoeffs back = alpha_from_gamma(gammas);
    for (std::size_t k = 0; k < alphas.size(); ++k) {
      round_trip = std::max(round_trip, std::abs(back[k] - alphas[k]));
    }
    det = std::max(det, char_poly_defect(gammas));
    const auto e1 = eigen_unitary(ggt_from_alpha(alphas)).eigenvalues;
    const auto e2 = eigen_unitary(cmv_from_alpha(alphas)).eigenvalues;
    for (std::size_t j = 0; j < e1.size(); ++j) cmv = std::max(cmv, std::abs(e1[j] - e2[j]));
    if (alphas.size() <= 16) {
      const VerblunskyCoeffs again = verblunsky_from_measure(spectral_measure(ggt_from_alpha(alphas)));
      for (std::size_t k = 0; k < alphas.size(); ++k) {
        measure = std::max(measure, std::abs(again[k] - alphas[k]));
      }
    }
  }
  out.push_back(detail::at_most("factorization", "identity:ggt=agr=reflection-product", fact, 1e-10));
  out.push_back(detail::at_most("cmv-spectrum", "identity:cmv-unitarily-equivalent-to-ggt", cmv, 1e-9));
  out.push_back(detail::at_most("alpha-gamma-round-trip", "bijection:verblunsky<->deformed", round_trip, 1e-12));
  out.push_back(detail::at_most("char-poly-at-one", "identity:det(1-U)=prod(1-gamma_k)", det, 1e-8));
  out.push_back(detail::at_most("measure-round-trip", "bijection:measure<->verblunsky", measure, 1e-8));

  double disk = 0.0;
  for (const auto& [l, s, t] : {std::tuple<double, cplx, cplx>{1.0, {1.0, 1.0}, {1.0, -1.0}},
                                {2.5, 0.5, 2.0}, {1.5, {0.0, 0.7}, 1.0}}) {
    const cplx exact = disk_integral(l, s, t);
    disk = std::max(disk, std::abs(disk_integral_numeric(l, s, t) - exact) / std::abs(exact));
  }
  out.push_back(detail::at_most("disk-integral", "closed-form:disk-integral", disk, 1e-6));

  double norm = 0.0;
  for (const DiskDensitySpec spec : {DiskDensitySpec{1.0, 1.0}, {2.5, {1.0, 1.0}}}) {
    const double mass = integrate_disk(
        [&](const DiskPoint& p) { return gamma_k_density_from(spec, p.one_minus_z, p.one_minus_r2); });
    norm = std::max(norm, std::abs(mass - 1.0));
  }
  out.push_back(detail::at_most("coefficient-density-mass", "law:deformed-coefficient-density", norm, 1e-6));

  double zst = 0.0;
  for (const auto& [s, t] : {std::pair<cplx, cplx>{1.0, 1.0}, {cplx(1.0, 1.0), cplx(1.0, -1.0)}}) {
    const cplx numeric = integrate_complex(
                             [&](double th) {
                               const cplx w = 1.0 - std::polar(1.0, th);
                               return std::pow(w, s) * std::pow(std::conj(w), t);
                             },
                             0.0, kTwoPi) /
                         kTwoPi;
    const cplx z = partition_zst(1, 2.0, s, t);
    zst = std::max(zst, std::abs(numeric - z) / std::abs(z));
  }
  out.push_back(detail::at_most("partition-function", "closed-form:partition-function-Z_st", zst, 1e-5));

  double b_gap = 0.0;
  for (const cplx d : {cplx(1.0, 0.0), cplx(0.0, 1.0)}) {
    b_gap = std::max(b_gap, std::abs(b_const_finite_n(d, 400, 2.0) - b_const(d)));
  }
  out.push_back(detail::at_most("free-energy-two-routes", "limit:free-energy-B(d)", b_gap, 0.02));

  double mass_gap = 0.0;
  double rate = 0.0;
  for (const cplx d : {cplx(1.0, 0.0), cplx(1.0, 1.0)}) {
    const ArcDensity grid = mu_d_grid(limit_params(d));
    mass_gap = std::max(mass_gap, std::abs(grid.mass() - 1.0));
    rate = std::max(rate, std::abs(rate_function(d, grid).rate));
  }
  out.push_back(detail::at_most("equilibrium-mass", "limit:equilibrium-measure-mu_d", mass_gap, 1e-8));
  out.push_back(detail::at_most("rate-zero-at-equilibrium", "ldp:rate-function-minimizer", rate, 1e-3));
  return out;
}

/// Seeded goodness-of-fit checks, each at significance kSignificance.
inline std::vector<CheckResult> statistical_suite(const ExperimentConfig& cfg, std::uint64_t seed) {
  constexpr int kDraws = 20000;
  std::vector<CheckResult> out;
  std::uint64_t stream = 0;
  auto draws = [&](auto&& f) {
    using T = decltype(f(std::declval<SeededRng&>()));
    return parallel_samples<T>(kDraws, seed, stream++, cfg.threads,
                               [&](std::size_t, SeededRng& rng) { return f(rng); });
  };

  {
    const EnsembleParams p{8, 2.0, 1.0};
    const DiskDensitySpec spec = coefficient_spec(p, 3);
    const DiskBinning bins = DiskBinning::for_radial_exponent(spec.a, 6, 8);
    std::vector<double> expected = bins.probabilities([&](cplx z) { return gamma_k_density(spec, z); });
    for (double& e : expected) e *= kDraws;
    std::vector<double> observed(bins.count(), 0.0);
    for (const cplx z : draws([&](SeededRng& rng) { return sample_gamma_k(rng, spec); })) {
      observed[bins.index(z)] += 1.0;
    }
    out.push_back(detail::p_value_check("coefficient-law-chi2", "law:deformed-coefficient-density",
                                        chi_square_test(observed, expected)));
  }
  {
    const cplx delta{1.0, 1.0};
    constexpr int kBins = 40;
    std::vector<double> expected(kBins);
    for (int b = 0; b < kBins; ++b) {
      expected[static_cast<std::size_t>(b)] =
          kDraws * integrate_tanh_sinh([&](double t) { return lambda_delta_density_at_angle(delta, t); },
                                       kTwoPi * b / kBins, kTwoPi * (b + 1) / kBins) /
          kTwoPi;
    }
    std::vector<double> observed(kBins, 0.0);
    for (const cplx z : draws([&](SeededRng& rng) { return sample_lambda_delta(rng, delta); })) {
      const auto b = static_cast<std::size_t>(wrap_angle(std::arg(z)) / kTwoPi * kBins);
      observed[std::min<std::size_t>(b, kBins - 1)] += 1.0;
    }
    out.push_back(detail::p_value_check("last-coefficient-angle-chi2", "law:lambda-delta-on-circle",
                                        chi_square_test(observed, expected)));
  }
  {
    constexpr int kGrid = 8;
    const EnsembleParams p{2, 2.0, 1.0};
    std::vector<double> expected = pair_cell_probabilities(p.beta, p.delta, kGrid);
    for (double& e : expected) e *= kDraws;
    std::vector<double> observed(expected.size(), 0.0);
    for (const auto& m : draws([&](SeededRng& rng) { return sample_cj_spectrum(rng, p); })) {
      observed[pair_cell_index(m.thetas()[0], m.thetas()[1], kGrid)] += 1.0;
    }
    out.push_back(detail::p_value_check("joint-eigenangle-chi2", "law:joint-eigenvalue-density",
                                        chi_square_test(observed, expected)));
  }
  {
    const EnsembleParams p{5, 2.0, {1.0, 1.0}};
    std::vector<double> first;
    std::vector<double> second;
    for (const auto& m : draws([&](SeededRng& rng) { return sample_cj_spectrum(rng, p); })) {
      first.push_back(m.weights()[0]);
      second.push_back(m.weights()[0] * m.weights()[0]);
    }
    // Weights are Dirichlet(b, ..., b) with b = beta' and independent of the angles,
    // so any single weight has mean 1/n and second moment (b+1) / (n (n b + 1)).
    const double b = p.beta_prime();
    const double n = p.n;
    out.push_back(detail::z_check("weights-first-moment", "law:dirichlet-weights", mean_stat(first), 1.0 / n));
    out.push_back(detail::z_check("weights-second-moment", "law:dirichlet-weights", mean_stat(second),
                                  (b + 1.0) / (n * (n * b + 1.0))));
  }
  {
    const EnsembleParams p{5, 2.0, 1.0};
    std::vector<double> modulus;
    for (const cplx z : draws([&](SeededRng& rng) { return char_poly_at_one(sample_eta(rng, p)); })) {
      modulus.push_back(std::abs(z));
    }
    out.push_back(detail::z_check("mellin-fourier-monte-carlo", "closed-form:mellin-fourier-det(1-U)",
                                  mean_stat(modulus), mellin_fourier(p, 0.0, 1.0).real()));
  }
  return out;
}

}  // namespace cje::harness
