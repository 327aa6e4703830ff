#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "nhme/linalg.hpp"
#include "test_util.hpp"

using namespace nhme;
using nhme::testing::max_abs;
using nhme::testing::random_density;
using nhme::testing::random_matrix;

namespace {

ComplexMatrix sx() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix diag(std::initializer_list<Complex> d) {
  ComplexVector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (auto x : d) v(i++) = x;
  return v.asDiagonal();
}

}  // namespace

TEST(Kron, IdentityTimesIdentity) {
  EXPECT_EQ(kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)),
            ComplexMatrix::Identity(4, 4));
}

TEST(Kron, SigmaXSigmaXIsAntidiagonal) {
  const ComplexMatrix k = kron(sx(), sx());
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_EQ(k(i, j), Complex(i + j == 3 ? 1.0 : 0.0, 0.0)) << i << "," << j;
}

TEST(Kron, Bilinear) {
  std::mt19937_64 rng(1);
  const ComplexMatrix b = random_matrix(2, rng);
  const Complex c(0.3, -1.2);
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  EXPECT_LT(max_abs(kron(c * id, b) - c * kron(id, b)), 1e-15);
}

TEST(Vectorize, ColumnStacking) {
  ComplexMatrix a(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;  // [[a,b],[c,d]]
  const ComplexVector v = vectorize(a);
  EXPECT_EQ(v(0), Complex(1.0));
  EXPECT_EQ(v(1), Complex(3.0));
  EXPECT_EQ(v(2), Complex(2.0));
  EXPECT_EQ(v(3), Complex(4.0));
}

TEST(Vectorize, RoundTripIsExact) {
  std::mt19937_64 rng(2);
  const ComplexMatrix a = random_matrix(4, rng);
  EXPECT_EQ(devectorize(vectorize(a), 4), a);
}

TEST(Vectorize, ProductIdentity) {
  std::mt19937_64 rng(3);
  const ComplexMatrix a = random_matrix(4, rng), x = random_matrix(4, rng), b = random_matrix(4, rng);
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  EXPECT_LT((vectorize(id * x * id) - kron(id, id) * vectorize(x)).norm(), 1e-14);
  // vec(AXB) = (B^T kron A) vec(X)
  EXPECT_LT((vectorize(a * x * b) - kron(b.transpose(), a) * vectorize(x)).norm(), 1e-12);
}

TEST(Vectorize, RejectsWrongLength) { EXPECT_THROW(devectorize(ComplexVector::Zero(5), 2), std::invalid_argument); }

TEST(PartialTrace, ProductState) {
  std::mt19937_64 rng(4);
  const ComplexMatrix rh = random_density(2, rng), rc = random_density(2, rng);
  EXPECT_LT(max_abs(partial_trace(kron(rh, rc), Qubit::hot) - rh), 1e-15);
  EXPECT_LT(max_abs(partial_trace(kron(rh, rc), Qubit::cold) - rc), 1e-15);
}

TEST(PartialTrace, MaximallyMixed) {
  const ComplexMatrix r = partial_trace(ComplexMatrix::Identity(4, 4) / 4.0, Qubit::cold);
  EXPECT_LT(max_abs(r - ComplexMatrix::Identity(2, 2) / 2.0), 1e-16);
}

TEST(PartialTrace, PreservesTrace) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    const ComplexMatrix rho = random_matrix(4, rng);
    EXPECT_LT(std::abs(partial_trace(rho, Qubit::hot).trace() - rho.trace()), 1e-13);
    EXPECT_LT(std::abs(partial_trace(rho, Qubit::cold).trace() - rho.trace()), 1e-13);
  }
}

TEST(PartialTrace, RejectsNonFourByFour) {
  EXPECT_THROW(partial_trace(ComplexMatrix::Identity(3, 3), Qubit::hot), std::invalid_argument);
}

TEST(EigGeneral, Diagonal) {
  const Spectrum s = eig_general(diag({4.0, 2.0, 3.0, 1.0}));
  ASSERT_EQ(s.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(s.eigenvalues[i].real(), i + 1.0, 1e-14);
  EXPECT_NEAR(s.condition_number, 1.0, 1e-12);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(s.right_eigenvectors.col(i).norm()), 1.0, 1e-14);
}

TEST(EigGeneral, JordanBlockIsIllConditioned) {
  ComplexMatrix j(2, 2);
  j << 0, 1, 0, 0;
  const Spectrum s = eig_general(j);
  EXPECT_LT(std::abs(s.eigenvalues[0]), 1e-12);
  EXPECT_LT(std::abs(s.eigenvalues[1]), 1e-12);
  EXPECT_GT(s.condition_number, 1e6);
}

TEST(EigGeneral, TwoQubitHamiltonianAnalytic) {
  // Blocks {|gg>,|ee>} = [[0,g],[g,2]] and {|ge>,|eg>} = [[1,g],[g,1]].
  const double g = 0.5;
  ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  h(1, 1) = 1.0;
  h(2, 2) = 1.0;
  h(3, 3) = 2.0;
  h(0, 3) = h(3, 0) = h(1, 2) = h(2, 1) = g;
  const Spectrum s = eig_general(h);
  const double expected[] = {1.0 - std::sqrt(1.0 + g * g), 1.0 - g, 1.0 + g, 1.0 + std::sqrt(1.0 + g * g)};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(s.eigenvalues[i].real(), expected[i], 1e-13);
    EXPECT_NEAR(s.eigenvalues[i].imag(), 0.0, 1e-13);
  }
  EXPECT_NEAR(s.eigenvalues[0].real(), -0.1180339887, 1e-9);
}

TEST(EigGeneral, ResidualsOnRandomMatrices) {
  std::mt19937_64 rng(6);
  for (int k = 0; k < 100; ++k) {
    const ComplexMatrix m = random_matrix(16, rng);
    const Spectrum s = eig_general(m);
    ASSERT_EQ(s.size(), 16u);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto col = s.right_eigenvectors.col(static_cast<Eigen::Index>(i));
      EXPECT_NEAR(col.norm(), 1.0, 1e-12);
      EXPECT_LT((m * col - s.eigenvalues[i] * col).norm(), 1e-10 * m.norm());
      if (i > 0) {
        const auto& a = s.eigenvalues[i - 1];
        const auto& b = s.eigenvalues[i];
        EXPECT_TRUE(a.real() < b.real() || (a.real() == b.real() && a.imag() <= b.imag()));
      }
    }
    EXPECT_GE(s.condition_number, 1.0 - 1e-12);
  }
}

TEST(EigGeneral, RepeatedSemisimpleEigenvalueKeepsIndependentVectors) {
  std::mt19937_64 rng(7);
  const ComplexMatrix s = random_matrix(4, rng);
  const ComplexMatrix m = s * diag({1.0, 1.0, 2.0, 3.0}) * s.inverse();
  const Spectrum sp = eig_general(m);
  EXPECT_LT(sp.condition_number, 1e6);
  for (std::size_t i = 0; i < sp.size(); ++i) {
    const auto col = sp.right_eigenvectors.col(static_cast<Eigen::Index>(i));
    EXPECT_LT((m * col - sp.eigenvalues[i] * col).norm(), 1e-10);
  }
  // The two columns for eigenvalue 1 span a two-dimensional space.
  const Eigen::JacobiSVD<ComplexMatrix> svd(sp.right_eigenvectors.leftCols(2));
  EXPECT_GT(svd.singularValues()(1), 1e-3);
}

TEST(EigGeneral, RejectsNonFinite) {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(0, 1) = std::nan("");
  EXPECT_THROW(eig_general(m), std::invalid_argument);
}

TEST(Expm, Zero) { EXPECT_LT(max_abs(expm(ComplexMatrix::Zero(4, 4)) - ComplexMatrix::Identity(4, 4)), 1e-16); }

TEST(Expm, Diagonal) {
  const ComplexMatrix e = expm(diag({0.7, -2.0}));
  EXPECT_NEAR(e(0, 0).real(), std::exp(0.7), 1e-14);
  EXPECT_NEAR(e(1, 1).real(), std::exp(-2.0), 1e-15);
  EXPECT_LT(std::abs(e(0, 1)) + std::abs(e(1, 0)), 1e-16);
}

TEST(Expm, PauliClosedForm) {
  const double theta = 0.3;
  const Complex i(0.0, 1.0);
  const ComplexMatrix expected = std::cos(theta) * ComplexMatrix::Identity(2, 2) - i * std::sin(theta) * sx();
  EXPECT_LT(max_abs(expm(-i * theta * sx()) - expected), 1e-15);
}

TEST(Expm, InverseAndEigenOracle) {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 10; ++k) {
    ComplexMatrix m = random_matrix(16, rng);
    m *= 10.0 / m.norm();
    const ComplexMatrix e = expm(m);
    EXPECT_LT(max_abs(e * expm(-m) - ComplexMatrix::Identity(16, 16)), 1e-10);
    // Independent route: V exp(D) V^-1 (random matrices are diagonalisable).
    Eigen::ComplexEigenSolver<ComplexMatrix> es(m);
    const ComplexMatrix v = es.eigenvectors();
    const ComplexMatrix oracle = v * es.eigenvalues().array().exp().matrix().asDiagonal() * v.inverse();
    EXPECT_LT((e - oracle).norm() / oracle.norm(), 1e-10);
  }
}

TEST(Expm, RejectsNonFinite) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(expm(m), std::invalid_argument);
}

TEST(LogmPsd, Identity) { EXPECT_LT(max_abs(logm_psd(ComplexMatrix::Identity(4, 4))), 1e-15); }

TEST(LogmPsd, Diagonal) {
  const double e = std::numbers::e;
  const ComplexMatrix l = logm_psd(diag({e, e * e}));
  EXPECT_NEAR(l(0, 0).real(), 1.0, 1e-14);
  EXPECT_NEAR(l(1, 1).real(), 2.0, 1e-14);
}

TEST(LogmPsd, RankDeficientEntropy) {
  const ComplexMatrix rho = diag({0.5, 0.5, 0.0, 0.0});
  EXPECT_NEAR((rho * logm_psd(rho)).trace().real(), -std::log(2.0), 1e-14);
}

TEST(LogmPsd, InvertsExponential) {
  std::mt19937_64 rng(9);
  const ComplexMatrix a = random_matrix(4, rng);
  const ComplexMatrix h = hermitian_part(a);
  EXPECT_LT(max_abs(logm_psd(expm(h)) - h), 1e-12);
}

TEST(LogmPsd, RejectsNonHermitianAndNegative) {
  ComplexMatrix m(2, 2);
  m << 1, 1, 0, 1;
  EXPECT_THROW(logm_psd(m), std::invalid_argument);
  EXPECT_THROW(logm_psd(diag({1.0, -0.5})), std::invalid_argument);
}

TEST(Norms, Identity) {
  const Norms n = norms(ComplexMatrix::Identity(4, 4));
  EXPECT_NEAR(n.trace_norm, 4.0, 1e-14);
  EXPECT_NEAR(n.frobenius_norm, 2.0, 1e-14);
}

TEST(Norms, SignsAbsorbed) {
  const Norms n = norms(diag({1.0, -1.0}));
  EXPECT_NEAR(n.trace_norm, 2.0, 1e-14);
  EXPECT_NEAR(n.frobenius_norm, std::sqrt(2.0), 1e-14);
}

TEST(Norms, OrderingAgainstSvd) {
  std::mt19937_64 rng(10);
  for (int k = 0; k < 20; ++k) {
    const ComplexMatrix a = random_matrix(4, rng);
    const Eigen::BDCSVD<ComplexMatrix> svd(a);
    const Eigen::VectorXd s = svd.singularValues();
    EXPECT_NEAR(trace_norm(a), s.sum(), 1e-12);
    EXPECT_NEAR(frobenius_norm(a), s.norm(), 1e-12);
    EXPECT_GE(trace_norm(a), frobenius_norm(a));
  }
}

TEST(ConditionNumber, Basic) {
  EXPECT_NEAR(condition_number(ComplexMatrix::Identity(3, 3)), 1.0, 1e-15);
  EXPECT_NEAR(condition_number(diag({10.0, 0.1})), 100.0, 1e-12);
  EXPECT_TRUE(std::isinf(condition_number(diag({1.0, 0.0}))));
}

TEST(ConditionNumber, Unitary) {
  std::mt19937_64 rng(11);
  const Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(6, rng));
  const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(6, 6);
  EXPECT_NEAR(condition_number(q), 1.0, 1e-12);
}

TEST(Helpers, HermitianPartAndDefect) {
  std::mt19937_64 rng(12);
  const ComplexMatrix a = random_matrix(4, rng);
  EXPECT_TRUE(is_hermitian(hermitian_part(a)));
  EXPECT_GT(hermiticity_defect(a), 1e-3);
  EXPECT_EQ(hermiticity_defect(ComplexMatrix::Zero(3, 3)), 0.0);
  EXPECT_LT(max_abs(commutator(a, a)), 1e-15);
}
