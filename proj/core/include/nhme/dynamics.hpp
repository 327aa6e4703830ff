#pragma once

#include <cstdint>
#include <vector>

#include "nhme/linalg.hpp"
#include "nhme/model.hpp"

namespace nhme {

/// States on a time grid. For jump-free or hybrid generators the states are the
/// unnormalised Omega(t) and traces are survival probabilities.
struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;
  std::vector<double> traces;

  std::size_t size() const { return times.size(); }
};

/// Uniform grid 0, dt, ..., t_max with n_steps intervals.
std::vector<double> uniform_grid(double t_max, std::size_t n_steps);

/// states[k] = devec(exp(t_k L) vec(rho0)). A uniform grid reuses one step propagator.
Trajectory propagate(const ComplexMatrix& liouvillian, const ComplexMatrix& rho0,
                     const std::vector<double>& times);

/// Divide every state by its trace; throws NumericalError naming the first
/// time index whose trace is below 1e-30.
Trajectory normalize(const Trajectory& trajectory);

/// Right-hand side of the nonlinear no-jump equation for the normalised state:
/// -i[H, rho] - {Gamma, rho} + 2 rho Tr(Gamma rho).
ComplexMatrix nonlinear_nojump_rhs(const ComplexMatrix& rho, const ComplexMatrix& h,
                                   const ComplexMatrix& gamma);

enum class NoJumpStep {
  /// exp(-i H_eff dt): same Kraus operator to first order, exact between jumps.
  exponential,
  /// The literal first-order Kraus operator 1 - i H_eff dt.
  first_order,
};

struct UnravelingOptions {
  NoJumpStep no_jump_step = NoJumpStep::exponential;
  /// 0 picks std::thread::hardware_concurrency(). Results do not depend on it.
  unsigned threads = 0;
};

struct UnravelingResult {
  std::vector<double> times;
  /// Ensemble average of |psi><psi| over trajectories, divided by n_traj.
  /// Trajectories that register a jump from a postselected bath are discarded,
  /// so for hybrid / jump-free specs this approximates the unnormalised Omega.
  std::vector<ComplexMatrix> mean_state_per_time;
  /// Normalised state of the record with no jumps at all (deterministic).
  std::vector<ComplexMatrix> nojump_state_per_time;
  std::vector<double> nojump_probability_per_time;
  std::size_t n_trajectories = 0;
  std::uint64_t seed = 0;
};

inline constexpr double kMaxJumpProbabilityPerStep = 1e-2;

/// Quantum-jump unraveling of the generator selected by `spec`. Requires a
/// uniform grid whose step satisfies max_j rate_j |L_j^dag L_j| dt <= 1e-2.
UnravelingResult mc_unraveling(const ModelParams& p, const GeneratorSpec& spec,
                               const ComplexMatrix& rho0, const std::vector<double>& times,
                               std::size_t n_traj, std::uint64_t seed,
                               const UnravelingOptions& options = {});

/// Thrown when the zero eigenvalue of a Liouvillian is degenerate; carries
/// every unit-trace (or traceless, normalised) null state.
class DegenerateSteadyState : public NumericalError {
 public:
  DegenerateSteadyState(const std::string& what, std::vector<ComplexMatrix> null_states)
      : NumericalError(what), null_states_(std::move(null_states)) {}
  const std::vector<ComplexMatrix>& null_states() const { return null_states_; }

 private:
  std::vector<ComplexMatrix> null_states_;
};

inline constexpr double kSteadyStateGapTolerance = 1e-8;

ComplexMatrix steady_state(const ComplexMatrix& liouvillian);

struct LongestLived {
  /// One projector |psi><psi| per eigenvector sharing the minimal decay rate.
  std::vector<ComplexMatrix> states;
  double decay_rate = 0.0;

  bool degenerate() const { return states.size() > 1; }
};

/// Right eigenvector(s) of H_eff with the smallest decay rate -Im(lambda).
LongestLived longest_lived_state(const ComplexMatrix& heff, double degeneracy_tol = 1e-10);

}  // namespace nhme
