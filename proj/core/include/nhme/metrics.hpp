#pragma once

#include <vector>

#include "nhme/linalg.hpp"

namespace nhme {

/// 1/2 |rho - sigma|_1.
double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma);

/// Trace distance after normalising both outputs; throws NumericalError when a
/// trace is at or below 1e-30.
double normalized_output_distance(const ComplexMatrix& e_out, const ComplexMatrix& f_out);

/// -sum p ln p over eigenvalues above the log cutoff (nats).
double vn_entropy(const ComplexMatrix& rho);

/// S_vN(rho) - ln Tr(Omega). Rejects rho that is not Omega / Tr(Omega) within 1e-10.
double nh_entropy(const ComplexMatrix& rho, const ComplexMatrix& omega);

struct NhEntropyRate {
  double eq16 = 0.0;
  double eq17 = 0.0;
  double svn_rate = 0.0;
};

/// Entropy production rate of the jump-free record, evaluated two ways:
///   eq16 = 2 [Tr(Gamma rho ln Omega) + (S_nH + 1) Tr(Gamma rho)]
///   eq17 = dS_vN/dt + 2 Tr(Gamma rho)
/// with dS_vN/dt = -Tr(rho' ln rho) along the normalised (nonlinear) flow.
NhEntropyRate nh_entropy_rate(const ComplexMatrix& rho, const ComplexMatrix& omega,
                              const ComplexMatrix& h, const ComplexMatrix& gamma);

struct EntropyProduction {
  double rate = 0.0;
  double svn_rate = 0.0;
  double heat_hot = 0.0;
  double heat_cold = 0.0;
  /// L(rho) had weight outside the support of rho; ln rho was regularised.
  bool flagged = false;
};

/// dS_vN/dt - Q_h/T_h - Q_c/T_c with Q_j = Tr(H D_j[rho]). `hot_dissipator` and
/// `cold_dissipator` are the per-bath superoperators including jumps.
EntropyProduction lindblad_entropy_production(const ComplexMatrix& rho,
                                              const ComplexMatrix& liouvillian,
                                              const ComplexMatrix& hot_dissipator,
                                              const ComplexMatrix& cold_dissipator,
                                              const ComplexMatrix& h, double T_h, double T_c);

struct ThermoRecord {
  double time = 0.0;
  double S_vN = 0.0;
  double S_nH = 0.0;
  double S_nH_rate_eq16 = 0.0;
  double S_nH_rate_eq17 = 0.0;
  double entropy_production_rate_lindblad = 0.0;
  double heat_rate_hot = 0.0;
  double heat_rate_cold = 0.0;
  bool flagged = false;
};

}  // namespace nhme
