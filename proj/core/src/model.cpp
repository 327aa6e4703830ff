#include "nhme/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nhme {

namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << "model." << field << " must be a finite positive number (got " << value << ")";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

void ModelParams::validate() const {
  require_positive(eps_h, "eps_h");
  require_positive(eps_c, "eps_c");
  require_positive(alpha_h, "alpha_h");
  require_positive(alpha_c, "alpha_c");
  require_positive(T_h, "T_h");
  require_positive(T_c, "T_c");
  require_positive(omega_c, "omega_c");
  if (!(g >= 0.0) || !std::isfinite(g)) {
    std::ostringstream os;
    os << "model.g must be a finite non-negative number (got " << g << ")";
    throw std::invalid_argument(os.str());
  }
}

std::string_view to_string(Bath b) { return b == Bath::hot ? "hot" : "cold"; }

std::string_view to_string(Approach a) { return a == Approach::local ? "local" : "global"; }

std::string_view to_string(JumpPolicy p) {
  switch (p) {
    case JumpPolicy::full: return "full";
    case JumpPolicy::none: return "none";
    case JumpPolicy::postselect_cold: return "postselect_cold";
    case JumpPolicy::postselect_hot: return "postselect_hot";
  }
  return "full";
}

std::optional<Approach> parse_approach(std::string_view s) {
  if (s == "local") return Approach::local;
  if (s == "global") return Approach::global;
  return std::nullopt;
}

std::optional<JumpPolicy> parse_jump_policy(std::string_view s) {
  if (s == "full") return JumpPolicy::full;
  if (s == "none") return JumpPolicy::none;
  if (s == "postselect_cold") return JumpPolicy::postselect_cold;
  if (s == "postselect_hot") return JumpPolicy::postselect_hot;
  return std::nullopt;
}

bool keeps_jumps(JumpPolicy policy, Bath bath) {
  switch (policy) {
    case JumpPolicy::full: return true;
    case JumpPolicy::none: return false;
    case JumpPolicy::postselect_cold: return bath == Bath::hot;
    case JumpPolicy::postselect_hot: return bath == Bath::cold;
  }
  return true;
}

namespace ops {

ComplexMatrix identity2() { return ComplexMatrix::Identity(2, 2); }

ComplexMatrix sigma_plus() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

ComplexMatrix sigma_minus() { return sigma_plus().adjoint(); }

ComplexMatrix sigma_x() { return sigma_plus() + sigma_minus(); }

ComplexMatrix embed(const ComplexMatrix& op, Bath qubit) {
  return qubit == Bath::hot ? kron(op, identity2()) : kron(identity2(), op);
}

}  // namespace ops

ComplexMatrix build_hamiltonian(const ModelParams& p) {
  using namespace ops;
  const ComplexMatrix excited = sigma_plus() * sigma_minus();
  return p.eps_h * embed(excited, Bath::hot) + p.eps_c * embed(excited, Bath::cold) +
         p.g * kron(sigma_x(), sigma_x());
}

double bose_einstein(double omega, double T) {
  if (!(omega > 0.0)) throw std::invalid_argument("bose_einstein: omega must be positive");
  if (!(T > 0.0)) throw std::invalid_argument("bose_einstein: T must be positive");
  return 1.0 / std::expm1(omega / T);
}

double rate_gamma(double omega, double alpha, double omega_c) {
  return omega < omega_c ? std::numbers::pi * alpha * omega : 0.0;
}

std::vector<DissipationTerm> local_terms(const ModelParams& p) {
  std::vector<DissipationTerm> terms;
  terms.reserve(4);
  for (Bath bath : {Bath::hot, Bath::cold}) {
    const bool hot = bath == Bath::hot;
    const double eps = hot ? p.eps_h : p.eps_c;
    const double gamma = rate_gamma(eps, hot ? p.alpha_h : p.alpha_c, p.omega_c);
    const double n = bose_einstein(eps, hot ? p.T_h : p.T_c);
    terms.push_back({gamma * n, ops::embed(ops::sigma_plus(), bath), bath, 0.0});
    terms.push_back({gamma * (1.0 + n), ops::embed(ops::sigma_minus(), bath), bath, 0.0});
  }
  return terms;
}

namespace {

struct EnergyBasis {
  Eigen::VectorXd energies;
  ComplexMatrix vectors;
};

EnergyBasis diagonalize(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(h));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("global_terms: Hamiltonian diagonalisation failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

std::vector<double> group_frequencies(std::vector<double> raw, double tol) {
  std::sort(raw.begin(), raw.end());
  std::vector<double> grouped;
  std::size_t start = 0;
  for (std::size_t k = 1; k <= raw.size(); ++k) {
    if (k == raw.size() || raw[k] - raw[start] > tol) {
      double sum = 0.0;
      for (std::size_t m = start; m < k; ++m) sum += raw[m];
      grouped.push_back(sum / static_cast<double>(k - start));
      start = k;
    }
  }
  return grouped;
}

std::vector<double> positive_differences(const Eigen::VectorXd& e, double tol) {
  std::vector<double> raw;
  for (Eigen::Index a = 0; a < e.size(); ++a) {
    for (Eigen::Index b = 0; b < e.size(); ++b) {
      const double w = e(b) - e(a);
      if (w > tol) raw.push_back(w);
    }
  }
  return group_frequencies(std::move(raw), tol);
}

}  // namespace

std::vector<double> bohr_frequencies(const ComplexMatrix& h, double tol) {
  return positive_differences(diagonalize(h).energies, tol);
}

EigenoperatorDecomposition eigenoperators(const ComplexMatrix& h, const ComplexMatrix& coupling,
                                          double tol) {
  const EnergyBasis basis = diagonalize(h);
  const auto& e = basis.energies;
  const ComplexMatrix& u = basis.vectors;
  const ComplexMatrix x = u.adjoint() * coupling * u;
  const Eigen::Index n = e.size();

  EigenoperatorDecomposition out;
  out.frequencies = positive_differences(e, tol);
  for (double w : out.frequencies) {
    ComplexMatrix a = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (std::abs(e(j) - e(i) - w) <= tol) a(i, j) = x(i, j);
      }
    }
    out.lowering.push_back(u * a * u.adjoint());
  }
  ComplexMatrix a0 = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(e(j) - e(i)) <= tol) a0(i, j) = x(i, j);
    }
  }
  out.dephasing = u * a0 * u.adjoint();
  return out;
}

std::vector<DissipationTerm> global_terms(const ModelParams& p) {
  const ComplexMatrix h = build_hamiltonian(p);
  std::vector<DissipationTerm> terms;
  for (Bath bath : {Bath::hot, Bath::cold}) {
    const bool hot = bath == Bath::hot;
    const double alpha = hot ? p.alpha_h : p.alpha_c;
    const double T = hot ? p.T_h : p.T_c;
    const auto decomposition = eigenoperators(h, ops::embed(ops::sigma_x(), bath));
    for (std::size_t k = 0; k < decomposition.frequencies.size(); ++k) {
      const ComplexMatrix& a = decomposition.lowering[k];
      if (a.norm() < 1e-14) continue;
      const double w = decomposition.frequencies[k];
      const double gamma = rate_gamma(w, alpha, p.omega_c);
      const double n = bose_einstein(w, T);
      terms.push_back({gamma * (1.0 + n), a, bath, w});
      terms.push_back({gamma * n, a.adjoint(), bath, w});
    }
  }
  return terms;
}

std::vector<DissipationTerm> dissipation_terms(const ModelParams& p, Approach approach) {
  return approach == Approach::local ? local_terms(p) : global_terms(p);
}

std::vector<double> cutoff_violations(const ModelParams& p) {
  std::vector<double> out;
  for (double w : bohr_frequencies(build_hamiltonian(p))) {
    if (w >= p.omega_c) out.push_back(w);
  }
  for (double e : {p.eps_h, p.eps_c}) {
    if (e >= p.omega_c) out.push_back(e);
  }
  return out;
}

ComplexMatrix build_gamma(const std::vector<DissipationTerm>& terms) {
  if (terms.empty()) throw std::invalid_argument("build_gamma: empty term list");
  const auto dim = terms.front().jump.rows();
  ComplexMatrix gamma = ComplexMatrix::Zero(dim, dim);
  for (const auto& t : terms) gamma += 0.5 * t.rate * (t.jump.adjoint() * t.jump);
  return hermitian_part(gamma);
}

ComplexMatrix dropped_gamma(const std::vector<DissipationTerm>& terms, JumpPolicy policy) {
  if (terms.empty()) throw std::invalid_argument("dropped_gamma: empty term list");
  const auto dim = terms.front().jump.rows();
  ComplexMatrix gamma = ComplexMatrix::Zero(dim, dim);
  for (const auto& t : terms) {
    if (!keeps_jumps(policy, t.bath)) gamma += 0.5 * t.rate * (t.jump.adjoint() * t.jump);
  }
  return hermitian_part(gamma);
}

ComplexMatrix build_heff(const ComplexMatrix& h, const ComplexMatrix& gamma) {
  if (h.rows() != gamma.rows() || h.cols() != gamma.cols()) {
    throw std::invalid_argument("build_heff: H and Gamma differ in dimension");
  }
  return h - Complex(0.0, 1.0) * gamma;
}

ComplexMatrix effective_hamiltonian(const ModelParams& p, Approach approach) {
  return build_heff(build_hamiltonian(p), build_gamma(dissipation_terms(p, approach)));
}

ComplexMatrix hamiltonian_superop(const ComplexMatrix& h) {
  const auto id = ComplexMatrix::Identity(h.rows(), h.cols());
  return Complex(0.0, -1.0) * (kron(id, h) - kron(h.transpose(), id));
}

ComplexMatrix dissipator_superop(const DissipationTerm& term, bool with_jump) {
  const ComplexMatrix& l = term.jump;
  const auto id = ComplexMatrix::Identity(l.rows(), l.cols());
  const ComplexMatrix ldl = l.adjoint() * l;
  ComplexMatrix out = -0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id);
  if (with_jump) out += kron(l.conjugate(), l);
  return term.rate * out;
}

ComplexMatrix bath_dissipator(const std::vector<DissipationTerm>& terms, Bath bath) {
  if (terms.empty()) throw std::invalid_argument("bath_dissipator: empty term list");
  const auto dim = terms.front().jump.rows();
  ComplexMatrix out = ComplexMatrix::Zero(dim * dim, dim * dim);
  for (const auto& t : terms) {
    if (t.bath == bath) out += dissipator_superop(t, true);
  }
  return out;
}

Liouvillian build_liouvillian(const ComplexMatrix& h, const std::vector<DissipationTerm>& terms,
                              JumpPolicy policy) {
  Liouvillian out;
  out.unitary = hamiltonian_superop(h);
  out.dissipative = ComplexMatrix::Zero(out.unitary.rows(), out.unitary.cols());
  for (const auto& t : terms) out.dissipative += dissipator_superop(t, keeps_jumps(policy, t.bath));
  out.full = out.unitary + out.dissipative;
  return out;
}

Liouvillian build_liouvillian(const ModelParams& p, const GeneratorSpec& spec) {
  return build_liouvillian(build_hamiltonian(p), dissipation_terms(p, spec.approach),
                           spec.jump_policy);
}

ComplexMatrix thermal_state(const ComplexMatrix& h, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("thermal_state: T must be positive");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(h));
  const Eigen::VectorXd& e = solver.eigenvalues();
  const double emin = e.minCoeff();
  Eigen::VectorXd w = (-(e.array() - emin) / T).exp();
  w /= w.sum();
  const ComplexMatrix& u = solver.eigenvectors();
  return hermitian_part(u * w.cast<Complex>().asDiagonal() * u.adjoint());
}

}  // namespace nhme
