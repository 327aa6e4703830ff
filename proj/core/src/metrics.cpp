#include "nhme/metrics.hpp"

#include <cmath>
#include <sstream>

#include "nhme/dynamics.hpp"

namespace nhme {

namespace {

double positive_trace(const ComplexMatrix& m, const char* what) {
  const double tr = m.trace().real();
  if (!(tr > 1e-30)) {
    std::ostringstream os;
    os << what << ": trace " << tr << " is not positive";
    throw NumericalError(os.str());
  }
  return tr;
}

struct SupportLog {
  ComplexMatrix log;
  ComplexMatrix null_projector;
};

/// ln rho on its support plus the projector onto the complement.
SupportLog support_log(const ComplexMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(rho));
  const auto& lambda = solver.eigenvalues();
  const double cutoff = kLogCutoff * std::max(lambda.maxCoeff(), 0.0);
  SupportLog out{ComplexMatrix::Zero(rho.rows(), rho.cols()),
                 ComplexMatrix::Zero(rho.rows(), rho.cols())};
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    const ComplexVector& v = solver.eigenvectors().col(k);
    if (lambda(k) > cutoff) {
      out.log += std::log(lambda(k)) * (v * v.adjoint());
    } else {
      out.null_projector += v * v.adjoint();
    }
  }
  return out;
}

/// ln rho with eigenvalues clamped at the cutoff instead of dropped.
ComplexMatrix clamped_log(const ComplexMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(rho));
  const auto& lambda = solver.eigenvalues();
  const double floor = kLogCutoff * std::max(lambda.maxCoeff(), 0.0);
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    const ComplexVector& v = solver.eigenvectors().col(k);
    out += std::log(std::max(lambda(k), floor)) * (v * v.adjoint());
  }
  return out;
}

ComplexMatrix apply(const ComplexMatrix& superop, const ComplexMatrix& rho) {
  return devectorize(superop * vectorize(rho), rho.rows());
}

}  // namespace

double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  // The difference of Hermitian states is Hermitian: |eigenvalues| are the singular values.
  return 0.5 * hermitian_eigenvalues(rho - sigma).cwiseAbs().sum();
}

double normalized_output_distance(const ComplexMatrix& e_out, const ComplexMatrix& f_out) {
  const double te = positive_trace(e_out, "normalized_output_distance");
  const double tf = positive_trace(f_out, "normalized_output_distance");
  return trace_distance(e_out / te, f_out / tf);
}

double vn_entropy(const ComplexMatrix& rho) {
  const Eigen::VectorXd p = hermitian_eigenvalues(rho);
  const double cutoff = kLogCutoff * std::max(p.maxCoeff(), 0.0);
  double s = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (p(k) > cutoff) s -= p(k) * std::log(p(k));
  }
  return s;
}

double nh_entropy(const ComplexMatrix& rho, const ComplexMatrix& omega) {
  const double tr = positive_trace(omega, "nh_entropy");
  if ((rho - omega / tr).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("nh_entropy: rho is not Omega / Tr(Omega)");
  }
  return vn_entropy(rho) - std::log(tr);
}

NhEntropyRate nh_entropy_rate(const ComplexMatrix& rho, const ComplexMatrix& omega,
                              const ComplexMatrix& h, const ComplexMatrix& gamma) {
  const double s_nh = nh_entropy(rho, omega);
  const double leak = (gamma * rho).trace().real();
  const SupportLog log_omega = support_log(omega);
  const SupportLog log_rho = support_log(rho);

  NhEntropyRate out;
  out.eq16 = 2.0 * ((gamma * rho * log_omega.log).trace().real() + (s_nh + 1.0) * leak);
  const ComplexMatrix rho_dot = nonlinear_nojump_rhs(rho, h, gamma);
  out.svn_rate = -(rho_dot * log_rho.log).trace().real();
  out.eq17 = out.svn_rate + 2.0 * leak;
  return out;
}

EntropyProduction lindblad_entropy_production(const ComplexMatrix& rho,
                                              const ComplexMatrix& liouvillian,
                                              const ComplexMatrix& hot_dissipator,
                                              const ComplexMatrix& cold_dissipator,
                                              const ComplexMatrix& h, double T_h, double T_c) {
  if (!(T_h > 0.0) || !(T_c > 0.0)) {
    throw std::invalid_argument("lindblad_entropy_production: temperatures must be positive");
  }
  const ComplexMatrix rho_dot = apply(liouvillian, rho);
  SupportLog log_rho = support_log(rho);

  EntropyProduction out;
  const ComplexMatrix off_support = log_rho.null_projector * rho_dot * log_rho.null_projector;
  ComplexMatrix log = log_rho.log;
  if (off_support.norm() > 1e-12 * std::max(1.0, rho_dot.norm())) {
    out.flagged = true;
    log = clamped_log(rho);
  }
  out.svn_rate = -(rho_dot * log).trace().real();
  out.heat_hot = (h * apply(hot_dissipator, rho)).trace().real();
  out.heat_cold = (h * apply(cold_dissipator, rho)).trace().real();
  out.rate = out.svn_rate - out.heat_hot / T_h - out.heat_cold / T_c;
  return out;
}

}  // namespace nhme
