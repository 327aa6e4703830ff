#include "nhme/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace nhme {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw std::invalid_argument(os.str());
  }
}

Eigen::VectorXd singular_values(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

/// A cluster of numerically equal eigenvalues whose eigenspace is full
/// (semisimple) gets an orthonormal basis of null(M - lambda I). The
/// triangular back-substitution otherwise returns nearly parallel vectors for
/// exact repeats, which is indistinguishable from a defective (EP) pair.
void orthonormalize_semisimple(const ComplexMatrix& m, const std::vector<Complex>& values,
                               ComplexMatrix& vectors) {
  const auto n = static_cast<Eigen::Index>(values.size());
  const double scale = std::max(1.0, m.norm());
  const double cluster_tol = 1e-10 * scale;
  const double rank_tol = 1e-9 * scale;

  std::vector<Eigen::Index> label(static_cast<std::size_t>(n));
  std::iota(label.begin(), label.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index x) {
    while (label[static_cast<std::size_t>(x)] != x) x = label[static_cast<std::size_t>(x)];
    return x;
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(values[static_cast<std::size_t>(i)] - values[static_cast<std::size_t>(j)]) <= cluster_tol) {
        label[static_cast<std::size_t>(find(j))] = find(i);
      }
    }
  }
  for (Eigen::Index root = 0; root < n; ++root) {
    std::vector<Eigen::Index> members;
    Complex mean{0.0, 0.0};
    for (Eigen::Index i = 0; i < n; ++i) {
      if (find(i) == root) {
        members.push_back(i);
        mean += values[static_cast<std::size_t>(i)];
      }
    }
    if (members.size() < 2) continue;
    mean /= static_cast<double>(members.size());
    const ComplexMatrix shifted = m - mean * ComplexMatrix::Identity(m.rows(), m.cols());
    Eigen::JacobiSVD<ComplexMatrix> svd(shifted, Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();  // descending
    Eigen::Index nullity = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k) nullity += s(k) <= rank_tol;
    const auto count = static_cast<Eigen::Index>(members.size());
    if (nullity < count) continue;  // defective: keep the coalescing vectors
    for (Eigen::Index k = 0; k < count; ++k) {
      vectors.col(members[static_cast<std::size_t>(k)]) = svd.matrixV().col(n - count + k);
    }
  }
}

}  // namespace

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector vectorize(const ComplexMatrix& a) {
  require_square(a, "vectorize");
  // Eigen storage is column-major, so a flat copy is exactly column stacking.
  return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

ComplexMatrix devectorize(const ComplexVector& v, Eigen::Index dim) {
  if (dim <= 0 || v.size() != dim * dim) {
    std::ostringstream os;
    os << "devectorize: vector of length " << v.size() << " does not match dim " << dim;
    throw std::invalid_argument(os.str());
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, Qubit keep) {
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw std::invalid_argument("partial_trace: expected a 4x4 two-qubit state");
  }
  ComplexMatrix out = ComplexMatrix::Zero(2, 2);
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int k = 0; k < 2; ++k) {
        out(x, y) += keep == Qubit::hot ? rho(2 * x + k, 2 * y + k) : rho(2 * k + x, 2 * k + y);
      }
    }
  }
  return out;
}

Spectrum eig_general(const ComplexMatrix& m) {
  require_square(m, "eig_general");
  if (!m.allFinite()) {
    throw std::invalid_argument("eig_general: matrix has non-finite entries");
  }
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "eig_general: eigensolver did not converge (dim " << m.rows()
       << ", |M|_F = " << m.norm() << ", condition " << condition_number(m) << ")";
    throw NumericalError(os.str());
  }

  const auto n = m.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto& values = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (values(a).real() != values(b).real()) return values(a).real() < values(b).real();
    return values(a).imag() < values(b).imag();
  });

  Spectrum out;
  out.eigenvalues.reserve(static_cast<std::size_t>(n));
  out.right_eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.eigenvalues.push_back(values(src));
    ComplexVector v = solver.eigenvectors().col(src);
    const double len = v.norm();
    if (len > 0.0) v /= len;
    out.right_eigenvectors.col(k) = v;
  }
  orthonormalize_semisimple(m, out.eigenvalues, out.right_eigenvectors);
  out.condition_number = condition_number(out.right_eigenvectors);
  return out;
}

ComplexMatrix expm(const ComplexMatrix& m) {
  require_square(m, "expm");
  if (!m.allFinite()) {
    throw std::invalid_argument("expm: matrix has non-finite entries");
  }
  ComplexMatrix out = m.exp();
  if (!out.allFinite()) {
    std::ostringstream os;
    os << "expm: overflow (|M|_F = " << m.norm() << ")";
    throw NumericalError(os.str());
  }
  return out;
}

ComplexMatrix logm_psd(const ComplexMatrix& m) {
  require_square(m, "logm_psd");
  if (hermiticity_defect(m) > 1e-10) {
    throw std::invalid_argument("logm_psd: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const double lmax = lambda.maxCoeff();
  if (lambda.minCoeff() < -1e-10 * std::max(1.0, std::abs(lmax))) {
    throw std::invalid_argument("logm_psd: matrix is not positive semidefinite");
  }
  ComplexMatrix out = ComplexMatrix::Zero(m.rows(), m.cols());
  if (lmax <= 0.0) return out;
  const double cutoff = kLogCutoff * lmax;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    if (lambda(k) > cutoff) {
      const ComplexVector& v = solver.eigenvectors().col(k);
      out += std::log(lambda(k)) * (v * v.adjoint());
    }
  }
  return out;
}

Norms norms(const ComplexMatrix& m) {
  return {trace_norm(m), frobenius_norm(m)};
}

double trace_norm(const ComplexMatrix& m) {
  require_square(m, "trace_norm");
  return singular_values(m).sum();
}

double frobenius_norm(const ComplexMatrix& m) { return m.norm(); }

double condition_number(const ComplexMatrix& v) {
  require_square(v, "condition_number");
  const Eigen::VectorXd s = singular_values(v);
  const double smax = s.maxCoeff();
  const double smin = s.minCoeff();
  if (smin < 1e-30) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

double hermiticity_defect(const ComplexMatrix& m) {
  const double scale = m.norm();
  if (scale == 0.0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && hermiticity_defect(m) <= tol;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

}  // namespace nhme
