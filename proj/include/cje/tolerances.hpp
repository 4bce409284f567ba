#pragma once

namespace cje {

/// Numerical tolerances shared by constructors, validators and tests.
///
/// Every operation that checks a structural invariant accepts a `Tolerances`
/// argument defaulting to `Tolerances{}`, so a caller (or the CLI config) can
/// override a single value without touching the others.
struct Tolerances {
  // | |alpha_{n-1}| - 1 | and | |gamma_{n-1}| - 1 | on construction.
  double unit_modulus = 1e-12;
  // Sum of spectral weights, unitarity residual of constructed matrices.
  double structural = 1e-10;
  // Round trips alpha <-> gamma.
  double round_trip = 1e-12;
  // |1 - gamma_j| below this is treated as the degenerate value gamma_j = 1.
  double degenerate = 1e-14;
  // |Phi_k(z)| below this is a pole of gamma_k(z).
  double pole = 1e-14;
  // Smallest admissible spectral weight before e_1 is declared non-cyclic.
  double cyclic_weight = 1e-14;
  // Largest admissible Gram conditioning 1 / ||Phi_{n-1}||^2.
  double gram_condition = 1e12;
  // Eigenpair residual ||U v - lambda v|| and | |lambda| - 1 |.
  double eigen_residual = 1e-9;
  // Precondition on the unitarity residual for the eigensolver.
  double eigen_unitarity = 1e-8;
};

}  // namespace cje
