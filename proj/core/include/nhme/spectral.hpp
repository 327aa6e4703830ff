#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "nhme/linalg.hpp"
#include "nhme/model.hpp"

namespace nhme {

/// |[M, M^dag]|_F / |M|_F^2; zero for normal matrices (and for M = 0).
double nonnormality(const ComplexMatrix& m);

struct CommutatorDiagnostics {
  double HGamma_norm = 0.0;
  double HD_contribution = 0.0;
  double DD_nonnormality = 0.0;
  double L_nonnormality = 0.0;
};

CommutatorDiagnostics commutator_diagnostics(const ModelParams& p, const GeneratorSpec& spec);

struct SweepPoint {
  double g = 0.0;
  std::vector<Complex> eigenvalues;  // tracked order
  double kappa_V = 1.0;
  double min_gap = 0.0;
  double min_pair_nonorthogonality = 1.0;
  std::vector<double> eigenvalue_moduli;
  /// False when the eigensolver failed here; tracking resumed from the last good point.
  bool ok = true;
};

using GeneratorFamily = std::function<ComplexMatrix(double)>;

/// Eigen-decompose family(g) along the grid, matching eigenvectors between
/// neighbouring points by maximal overlap.
std::vector<SweepPoint> eigen_track(const GeneratorFamily& family, const std::vector<double>& g_grid);

/// Permutation perm maximising sum_i weight(i, perm[i]) (Hungarian algorithm).
std::vector<std::size_t> max_weight_assignment(const Eigen::MatrixXd& weight);

enum class EPTarget { heff, liouvillian };
std::string_view to_string(EPTarget t);
std::optional<EPTarget> parse_ep_target(std::string_view s);

/// H_eff (4x4) or the Liouvillian (16x16) of `spec` as a function of g.
GeneratorFamily generator_family(const ModelParams& p, const GeneratorSpec& spec, EPTarget target);

struct EPThresholds {
  double gap_tol = 1e-6;
  double orth_tol = 1e-4;
  double kappa_min = 1e3;
};

struct EPReport {
  double g_star = 0.0;
  GeneratorSpec spec;
  EPTarget target = EPTarget::heff;
  std::pair<std::size_t, std::size_t> coalescing_indices{0, 0};
  Complex eigenvalue{0.0, 0.0};  // mean of the coalescing pair
  double kappa_at_peak = 1.0;
  double gap_at_peak = 0.0;
  double nonorthogonality_at_peak = 1.0;
  bool filtered = true;
};

/// Spectral data of a single matrix as used by the EP criteria. The
/// coalescing pair is the one with the smallest eigenvalue gap among pairs
/// whose nonorthogonality is at most orth_tol, or the most parallel pair if
/// none qualifies.
struct PairAnalysis {
  double kappa = 1.0;
  std::size_t i = 0;
  std::size_t j = 0;
  double gap = 0.0;
  double nonorthogonality = 1.0;
  Complex eigenvalue{0.0, 0.0};
};
PairAnalysis analyse_pairs(const ComplexMatrix& m, double orth_tol);

/// Refine a kappa peak inside [g_lo, g_hi]. `tol` <= 0 selects
/// min(1e-6, 1e-3 (g_hi - g_lo)).
EPReport ep_refine(const GeneratorFamily& family, double g_lo, double g_hi,
                   const EPThresholds& thresholds = {}, double tol = 0.0);

/// Sets filtered on every report failing any of the three criteria.
std::vector<EPReport> peak_filter(std::vector<EPReport> reports, const EPThresholds& thresholds);

/// Every interior local maximum of kappa(V) along the grid, refined and
/// classified. Accepted EPs are the reports with filtered == false.
std::vector<EPReport> ep_scan(const ModelParams& p, const GeneratorSpec& spec, EPTarget target,
                              const std::vector<double>& g_grid, const EPThresholds& thresholds = {});

std::vector<EPReport> accepted(const std::vector<EPReport>& reports);

/// Largest eigenvalue displacement of m + eps * perturbation for each eps.
/// Near an EP the shift scales as sqrt(eps), elsewhere linearly.
std::vector<double> perturbation_response(const ComplexMatrix& m, const ComplexMatrix& perturbation,
                                          const std::vector<double>& eps);

/// Slope of log(shift) against log(eps) from a least-squares fit.
double response_exponent(const std::vector<double>& eps, const std::vector<double>& shifts);

}  // namespace nhme
