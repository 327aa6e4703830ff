#pragma once

#include <random>

#include "nhme/linalg.hpp"
#include "nhme/model.hpp"

namespace nhme::testing {

inline ComplexMatrix random_matrix(Eigen::Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, 1.0);
  ComplexMatrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = scale * Complex(d(rng), d(rng));
  return m;
}

// Full-rank density matrix A A^dag / Tr.
inline ComplexMatrix random_density(Eigen::Index n, std::mt19937_64& rng) {
  const ComplexMatrix a = random_matrix(n, rng);
  ComplexMatrix rho = a * a.adjoint();
  rho /= rho.trace();
  return hermitian_part(rho);
}

inline ComplexMatrix random_pure(Eigen::Index n, std::mt19937_64& rng) {
  ComplexVector v = random_matrix(n, rng).col(0);
  v.normalize();
  return v * v.adjoint();
}

// Random model parameters inside the validated domain (all Bohr frequencies
// below omega_c).
inline ModelParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ModelParams p;
  p.eps_h = 0.5 + u(rng);
  p.eps_c = 0.5 + u(rng);
  p.g = 1.5 * u(rng);
  p.alpha_h = 0.01 + 0.3 * u(rng);
  p.alpha_c = 0.01 + 0.3 * u(rng);
  p.T_h = 0.2 + 2.0 * u(rng);
  p.T_c = 0.05 + 1.0 * u(rng);
  p.omega_c = 20.0;
  return p;
}

// Parameters of the strong-coupling figures.
inline ModelParams fig4_params(double g = 0.0) {
  ModelParams p;
  p.eps_h = 1.0;
  p.eps_c = 1.0;
  p.g = g;
  p.alpha_c = 0.2;
  p.alpha_h = 0.05;
  p.T_c = 0.1;
  p.T_h = 1.0;
  p.omega_c = 10.0;
  return p;
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace nhme::testing
