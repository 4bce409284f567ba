// Limit density of the eigenvalues when delta = beta' n d, compared against a
// histogram of one large sample.

#include <cstdio>
#include <vector>

#include "cje/analysis.hpp"
#include "cje/matrix_models.hpp"

int main() {
  const cje::cplx d{1.0, 0.5};
  const int n = 400;
  const double beta = 2.0;
  const cje::LimitParams lp = cje::limit_params(d);
  std::printf("d = (%.2f, %.2f): support arc (%.4f, %.4f)\n", d.real(), d.imag(), lp.lower(),
              lp.upper());

  cje::SeededRng rng(7);
  const cje::EnsembleParams params{n, beta, d * (beta / 2.0 * n)};
  const cje::SpectralMeasure mu = cje::sample_cj_spectrum(rng, params);

  constexpr int kBins = 24;
  std::vector<int> counts(kBins, 0);
  for (const double t : mu.thetas()) ++counts[std::min(kBins - 1, static_cast<int>(t / cje::kTwoPi * kBins))];
  std::printf("%10s %12s %12s\n", "theta", "histogram", "w_d");
  for (int b = 0; b < kBins; ++b) {
    const double mid = cje::kTwoPi * (b + 0.5) / kBins;
    const double hist = static_cast<double>(counts[b]) / n * kBins;
    std::printf("%10.4f %12.4f %12.4f\n", mid, hist, cje::w_d(lp, mid));
  }
  const double ks = cje::ks_distance(
      cje::EmpiricalMeasure::esd(std::vector<double>(mu.thetas().begin(), mu.thetas().end())), lp);
  std::printf("KS distance to the limit CDF: %.4f\n", ks);
  return 0;
}
