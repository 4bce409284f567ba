// Draw circular Jacobi matrices through independent deformed coefficients and
// compare the Monte Carlo mean of |det(Id - U)| with its closed form.

#include <cstdio>
#include <vector>

#include "cje/analysis.hpp"
#include "cje/matrix_models.hpp"
#include "cje/stats.hpp"

int main() {
  const cje::EnsembleParams params{6, 2.0, {1.0, 0.5}};
  cje::SeededRng rng(2024);

  const cje::DeformedCoeffs gammas = cje::sample_eta(rng, params);
  const cje::DenseUnitary u = cje::reflection_product(gammas);
  const cje::SpectralMeasure mu = cje::spectral_measure(u);
  std::printf("one sample, n = %d, unitarity residual %.2e\n", params.n, u.unitarity_residual());
  for (std::size_t j = 0; j < mu.size(); ++j) {
    std::printf("  theta = %.6f  weight = %.6f\n", mu.thetas()[j], mu.weights()[j]);
  }

  std::vector<double> modulus;
  for (int i = 0; i < 20000; ++i) {
    modulus.push_back(std::abs(cje::char_poly_at_one(cje::sample_eta(rng, params))));
  }
  const cje::MeanStat m = cje::mean_stat(modulus);
  const double exact = cje::mellin_fourier(params, 0.0, 1.0).real();
  std::printf("E|det(Id - U)|: Monte Carlo %.5f +- %.5f, closed form %.5f\n", m.mean, m.std_error,
              exact);
  return 0;
}
