#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nhme {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Raised when a numerical routine cannot deliver its contract (non-convergence,
/// overflow, vanishing normalisation). Precondition violations use
/// std::invalid_argument instead.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eigen-decomposition of a general complex matrix.
///
/// Eigenvalues are ordered by real part, then imaginary part. Column i of
/// right_eigenvectors is the unit-norm eigenvector for eigenvalues[i]. Near an
/// exceptional point the columns become nearly parallel and condition_number
/// blows up; that is reported, not treated as a failure.
struct Spectrum {
  std::vector<Complex> eigenvalues;
  ComplexMatrix right_eigenvectors;
  double condition_number = 1.0;

  std::size_t size() const { return eigenvalues.size(); }
};

struct Norms {
  double trace_norm = 0.0;
  double frobenius_norm = 0.0;
};

enum class Qubit { hot, cold };

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Column-stacking: vectorize(A)[j*dim + i] = A(i, j).
ComplexVector vectorize(const ComplexMatrix& a);
ComplexMatrix devectorize(const ComplexVector& v, Eigen::Index dim);

/// Reduced state of one qubit of a two-qubit state (hot qubit is the first
/// tensor factor).
ComplexMatrix partial_trace(const ComplexMatrix& rho, Qubit keep);

Spectrum eig_general(const ComplexMatrix& m);

ComplexMatrix expm(const ComplexMatrix& m);

/// Principal logarithm of a Hermitian PSD matrix on its support. Eigenvalues
/// below kLogCutoff * lambda_max are dropped (they contribute a zero block).
ComplexMatrix logm_psd(const ComplexMatrix& m);
inline constexpr double kLogCutoff = 1e-14;

Norms norms(const ComplexMatrix& m);
double trace_norm(const ComplexMatrix& m);
double frobenius_norm(const ComplexMatrix& m);

/// sigma_max / sigma_min, or +infinity when sigma_min < 1e-30.
double condition_number(const ComplexMatrix& v);

// Small helpers shared across modules.

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// max |M(i,j) - conj(M(j,i))| relative to the Frobenius norm (0 for M = 0).
double hermiticity_defect(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = 1e-12);

ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// Eigenvalues of a Hermitian matrix (ascending); the anti-Hermitian part is ignored.
Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m);

}  // namespace nhme
