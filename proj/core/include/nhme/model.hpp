#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nhme/linalg.hpp"

namespace nhme {

/// Physical parameters of the two-qubit, two-bath model. Energies and
/// temperatures are in units of eps_h with hbar = k_B = 1.
struct ModelParams {
  double eps_h = 1.0;
  double eps_c = 1.0;
  double g = 0.0;
  double alpha_h = 0.05;
  double alpha_c = 0.2;
  double T_h = 1.0;
  double T_c = 0.1;
  double omega_c = 10.0;

  double detuning() const { return eps_c - eps_h; }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  ModelParams with_g(double value) const {
    ModelParams p = *this;
    p.g = value;
    return p;
  }
  ModelParams with_T_h(double value) const {
    ModelParams p = *this;
    p.T_h = value;
    return p;
  }

  bool operator==(const ModelParams&) const = default;
};

enum class Bath { hot, cold };
enum class Approach { local, global };
enum class JumpPolicy { full, none, postselect_cold, postselect_hot };

struct GeneratorSpec {
  Approach approach = Approach::local;
  JumpPolicy jump_policy = JumpPolicy::full;

  bool operator==(const GeneratorSpec&) const = default;
};

/// One rate / jump-operator pair of the GKSL generator.
struct DissipationTerm {
  double rate = 0.0;
  ComplexMatrix jump;
  Bath bath = Bath::hot;
  double frequency = 0.0;  // Bohr frequency; 0 for local terms
};

/// Vectorised generator split into its unitary part -i[H, .] and the rest.
struct Liouvillian {
  ComplexMatrix full;
  ComplexMatrix unitary;
  ComplexMatrix dissipative;
};

std::string_view to_string(Bath b);
std::string_view to_string(Approach a);
std::string_view to_string(JumpPolicy p);
std::optional<Approach> parse_approach(std::string_view s);
std::optional<JumpPolicy> parse_jump_policy(std::string_view s);

/// Whether jump terms of `bath` survive under `policy`.
bool keeps_jumps(JumpPolicy policy, Bath bath);

namespace ops {
// Single-qubit operators in the {|g>, |e>} basis; sigma_plus = |e><g|.
ComplexMatrix identity2();
ComplexMatrix sigma_plus();
ComplexMatrix sigma_minus();
ComplexMatrix sigma_x();
/// Embed a single-qubit operator into the two-qubit space (hot qubit first).
ComplexMatrix embed(const ComplexMatrix& op, Bath qubit);
}  // namespace ops

/// H = eps_h s+s- (x) 1 + eps_c 1 (x) s+s- + g sx (x) sx, basis |gg>,|ge>,|eg>,|ee>.
ComplexMatrix build_hamiltonian(const ModelParams& p);

/// 1 / (exp(omega/T) - 1); rejects omega <= 0 or T <= 0.
double bose_einstein(double omega, double T);

/// Ohmic emission rate 2 pi J(omega) = pi alpha omega below the cutoff, 0 at or above it.
double rate_gamma(double omega, double alpha, double omega_c);

std::vector<DissipationTerm> local_terms(const ModelParams& p);

/// Frequency tolerance used to group Bohr frequencies (units of eps_h).
inline constexpr double kBohrTolerance = 1e-9;

/// Secular (global) terms: one emission/absorption pair per bath and positive
/// Bohr frequency, built from eigenoperators of the coupling sigma_x^(j).
std::vector<DissipationTerm> global_terms(const ModelParams& p);

std::vector<DissipationTerm> dissipation_terms(const ModelParams& p, Approach approach);

/// Eigenoperator A_j(omega) of sigma_x^(j) for every positive Bohr frequency,
/// plus the (expected zero) dephasing block A_j(0).
struct EigenoperatorDecomposition {
  std::vector<double> frequencies;
  std::vector<ComplexMatrix> lowering;  // A(omega), lowers energy by omega
  ComplexMatrix dephasing;              // A(0)
};
EigenoperatorDecomposition eigenoperators(const ComplexMatrix& h, const ComplexMatrix& coupling,
                                          double tol = kBohrTolerance);

/// Positive Bohr frequencies of H (grouped within kBohrTolerance).
std::vector<double> bohr_frequencies(const ComplexMatrix& h, double tol = kBohrTolerance);

/// Bohr frequencies and bare qubit energies at or above omega_c.
std::vector<double> cutoff_violations(const ModelParams& p);

/// Gamma = 1/2 sum_j rate_j L_j^dag L_j; `terms` must be non-empty.
ComplexMatrix build_gamma(const std::vector<DissipationTerm>& terms);

/// Gamma restricted to terms of baths whose jumps the policy drops.
ComplexMatrix dropped_gamma(const std::vector<DissipationTerm>& terms, JumpPolicy policy);

ComplexMatrix build_heff(const ComplexMatrix& h, const ComplexMatrix& gamma);

ComplexMatrix effective_hamiltonian(const ModelParams& p, Approach approach);

/// Superoperator of rate * D[L]; with_jump = false keeps only the anticommutator.
ComplexMatrix dissipator_superop(const DissipationTerm& term, bool with_jump = true);

/// -i[H, .] in column-stacked Liouville space.
ComplexMatrix hamiltonian_superop(const ComplexMatrix& h);

/// Full dissipator (jumps included) of one bath.
ComplexMatrix bath_dissipator(const std::vector<DissipationTerm>& terms, Bath bath);

Liouvillian build_liouvillian(const ModelParams& p, const GeneratorSpec& spec);
Liouvillian build_liouvillian(const ComplexMatrix& h, const std::vector<DissipationTerm>& terms,
                              JumpPolicy policy);

/// exp(-H/T) / Tr exp(-H/T).
ComplexMatrix thermal_state(const ComplexMatrix& h, double T);

}  // namespace nhme
