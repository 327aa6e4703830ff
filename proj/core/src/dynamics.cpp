#include "nhme/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

namespace nhme {

namespace {

void require_grid(const std::vector<double>& times) {
  if (times.empty()) throw std::invalid_argument("time grid is empty");
  if (times.front() != 0.0) throw std::invalid_argument("time grid must start at t = 0");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) {
      throw std::invalid_argument("time grid must be strictly increasing");
    }
  }
}

/// Uniform step of the grid, or 0 when spacing varies by more than 1e-9 relative.
double uniform_step(const std::vector<double>& times) {
  if (times.size() < 2) return 0.0;
  const double dt = times[1] - times[0];
  for (std::size_t k = 2; k < times.size(); ++k) {
    if (std::abs((times[k] - times[k - 1]) - dt) > 1e-9 * dt) return 0.0;
  }
  return dt;
}

double real_trace(const ComplexMatrix& m) { return m.trace().real(); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-trajectory substream: trajectory i of seed s always sees the same numbers.
class TrajectoryRng {
 public:
  TrajectoryRng(std::uint64_t seed, std::uint64_t index)
      : engine_(splitmix64(splitmix64(seed) ^ index)) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

struct Channel {
  ComplexMatrix scaled_jump;  // sqrt(rate) L
  bool kept;
};

constexpr std::size_t kBlockSize = 64;

}  // namespace

std::vector<double> uniform_grid(double t_max, std::size_t n_steps) {
  if (!(t_max > 0.0) || n_steps == 0) {
    throw std::invalid_argument("uniform_grid: need t_max > 0 and n_steps >= 1");
  }
  std::vector<double> times(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k) {
    times[k] = t_max * static_cast<double>(k) / static_cast<double>(n_steps);
  }
  return times;
}

Trajectory propagate(const ComplexMatrix& liouvillian, const ComplexMatrix& rho0,
                     const std::vector<double>& times) {
  require_grid(times);
  if (rho0.rows() != rho0.cols() || liouvillian.rows() != rho0.size() ||
      liouvillian.cols() != rho0.size()) {
    throw std::invalid_argument("propagate: Liouvillian and state dimensions disagree");
  }
  const Eigen::Index dim = rho0.rows();

  Trajectory out;
  out.times = times;
  out.states.reserve(times.size());
  out.traces.reserve(times.size());
  out.states.push_back(rho0);
  out.traces.push_back(real_trace(rho0));

  ComplexVector v = vectorize(rho0);
  const double dt = uniform_step(times);
  ComplexMatrix step;
  if (dt > 0.0) step = expm(dt * liouvillian);
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (dt > 0.0) {
      v = step * v;
    } else {
      v = expm((times[k] - times[k - 1]) * liouvillian) * v;
    }
    out.states.push_back(devectorize(v, dim));
    out.traces.push_back(real_trace(out.states.back()));
  }
  return out;
}

Trajectory normalize(const Trajectory& trajectory) {
  Trajectory out = trajectory;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double tr = trajectory.traces[k];
    if (!(std::abs(tr) > 1e-30)) {
      std::ostringstream os;
      os << "normalize: trace vanishes at time index " << k << " (t = " << trajectory.times[k]
         << ")";
      throw NumericalError(os.str());
    }
    out.states[k] = trajectory.states[k] / tr;
    out.traces[k] = 1.0;
  }
  return out;
}

ComplexMatrix nonlinear_nojump_rhs(const ComplexMatrix& rho, const ComplexMatrix& h,
                                   const ComplexMatrix& gamma) {
  const Complex leak = (gamma * rho).trace();
  return Complex(0.0, -1.0) * commutator(h, rho) - (gamma * rho + rho * gamma) +
         2.0 * leak * rho;
}

UnravelingResult mc_unraveling(const ModelParams& p, const GeneratorSpec& spec,
                               const ComplexMatrix& rho0, const std::vector<double>& times,
                               std::size_t n_traj, std::uint64_t seed,
                               const UnravelingOptions& options) {
  require_grid(times);
  if (times.size() < 2) throw std::invalid_argument("mc_unraveling: need at least one step");
  if (n_traj == 0) throw std::invalid_argument("mc_unraveling: n_traj must be positive");
  const double dt = uniform_step(times);
  if (dt <= 0.0) throw std::invalid_argument("mc_unraveling: time grid must be uniform");
  if (rho0.rows() != 4 || rho0.cols() != 4 || !is_hermitian(rho0, 1e-10)) {
    throw std::invalid_argument("mc_unraveling: rho0 must be a Hermitian 4x4 state");
  }

  const ComplexMatrix h = build_hamiltonian(p);
  const auto terms = dissipation_terms(p, spec.approach);
  const ComplexMatrix heff = build_heff(h, build_gamma(terms));

  double max_rate = 0.0;
  std::vector<Channel> channels;
  for (const auto& t : terms) {
    const double strength = t.rate * hermitian_eigenvalues(t.jump.adjoint() * t.jump).maxCoeff();
    max_rate = std::max(max_rate, strength);
    if (t.rate > 0.0) channels.push_back({std::sqrt(t.rate) * t.jump, keeps_jumps(spec.jump_policy, t.bath)});
  }
  if (max_rate * dt > kMaxJumpProbabilityPerStep) {
    std::ostringstream os;
    os << "mc_unraveling: time step " << dt << " too large; need dt <= "
       << kMaxJumpProbabilityPerStep / max_rate;
    throw std::invalid_argument(os.str());
  }

  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  const ComplexMatrix no_jump = options.no_jump_step == NoJumpStep::exponential
                                    ? expm(Complex(0.0, -1.0) * dt * heff)
                                    : ComplexMatrix(id - Complex(0.0, 1.0) * dt * heff);

  // Initial eigen-ensemble.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> init(hermitian_part(rho0));
  Eigen::VectorXd weights = init.eigenvalues().cwiseMax(0.0);
  if (!(weights.sum() > 0.0)) throw std::invalid_argument("mc_unraveling: rho0 has no weight");
  weights /= weights.sum();
  const ComplexMatrix& basis = init.eigenvectors();

  const std::size_t n_times = times.size();
  UnravelingResult out;
  out.times = times;
  out.n_trajectories = n_traj;
  out.seed = seed;

  // Deterministic jump-free record.
  ComplexMatrix omega = rho0;
  for (std::size_t k = 0; k < n_times; ++k) {
    if (k > 0) omega = no_jump * omega * no_jump.adjoint();
    const double tr = real_trace(omega);
    out.nojump_probability_per_time.push_back(tr);
    out.nojump_state_per_time.push_back(omega / tr);
  }

  auto run_block = [&](std::size_t block) {
    std::vector<ComplexMatrix> sum(n_times, ComplexMatrix::Zero(4, 4));
    const std::size_t first = block * kBlockSize;
    const std::size_t last = std::min(n_traj, first + kBlockSize);
    std::vector<double> probs(channels.size());
    for (std::size_t traj = first; traj < last; ++traj) {
      TrajectoryRng rng(seed, traj);
      double r = rng.uniform();
      Eigen::Index pick = weights.size() - 1;
      for (Eigen::Index m = 0; m < weights.size(); ++m) {
        if (r < weights(m)) {
          pick = m;
          break;
        }
        r -= weights(m);
      }
      ComplexVector psi = basis.col(pick);
      sum[0] += psi * psi.adjoint();
      for (std::size_t k = 1; k < n_times; ++k) {
        const ComplexVector drift = no_jump * psi;
        const double survive = drift.squaredNorm();
        const double u = rng.uniform();
        if (u < 1.0 - survive) {
          double total = 0.0;
          for (std::size_t c = 0; c < channels.size(); ++c) {
            probs[c] = (channels[c].scaled_jump * psi).squaredNorm();
            total += probs[c];
          }
          double target = rng.uniform() * total;
          std::size_t c = channels.size() - 1;
          for (std::size_t m = 0; m < channels.size(); ++m) {
            if (target < probs[m]) {
              c = m;
              break;
            }
            target -= probs[m];
          }
          if (!channels[c].kept) break;  // postselected bath clicked: record discarded
          psi = channels[c].scaled_jump * psi;
          psi.normalize();
        } else {
          psi = drift / std::sqrt(survive);
        }
        sum[k] += psi * psi.adjoint();
      }
    }
    return sum;
  };

  const std::size_t n_blocks = (n_traj + kBlockSize - 1) / kBlockSize;
  unsigned threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_blocks)));

  std::vector<ComplexMatrix> total(n_times, ComplexMatrix::Zero(4, 4));
  for (std::size_t wave = 0; wave < n_blocks; wave += threads) {
    const std::size_t count = std::min<std::size_t>(threads, n_blocks - wave);
    std::vector<std::vector<ComplexMatrix>> partial(count);
    if (count == 1) {
      partial[0] = run_block(wave);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(count);
      for (std::size_t b = 0; b < count; ++b) {
        pool.emplace_back([&, b] { partial[b] = run_block(wave + b); });
      }
      for (auto& t : pool) t.join();
    }
    // Fixed block order keeps the reduction independent of thread count.
    for (std::size_t b = 0; b < count; ++b) {
      for (std::size_t k = 0; k < n_times; ++k) total[k] += partial[b][k];
    }
  }
  out.mean_state_per_time.reserve(n_times);
  for (auto& m : total) out.mean_state_per_time.push_back(m / static_cast<double>(n_traj));
  return out;
}

ComplexMatrix steady_state(const ComplexMatrix& liouvillian) {
  if (liouvillian.rows() != liouvillian.cols()) {
    throw std::invalid_argument("steady_state: Liouvillian must be square");
  }
  const auto dim = static_cast<Eigen::Index>(std::lround(std::sqrt(liouvillian.rows())));
  if (dim * dim != liouvillian.rows()) {
    throw std::invalid_argument("steady_state: Liouvillian size is not a perfect square");
  }

  const Spectrum spectrum = eig_general(liouvillian);
  std::vector<double> moduli;
  for (const auto& l : spectrum.eigenvalues) moduli.push_back(std::abs(l));
  std::vector<std::size_t> order(moduli.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return moduli[a] < moduli[b]; });

  auto as_state = [&](const ComplexVector& v) {
    ComplexMatrix m = hermitian_part(devectorize(v, dim));
    const double tr = real_trace(m);
    if (std::abs(tr) > 1e-14) return ComplexMatrix(m / tr);
    return ComplexMatrix(m / m.norm());
  };

  if (order.size() > 1 && moduli[order[1]] <= kSteadyStateGapTolerance) {
    std::vector<ComplexMatrix> nulls;
    for (auto k : order) {
      if (moduli[k] > kSteadyStateGapTolerance) break;
      nulls.push_back(as_state(spectrum.right_eigenvectors.col(static_cast<Eigen::Index>(k))));
    }
    std::ostringstream os;
    os << "steady_state: zero eigenvalue is " << nulls.size() << "-fold degenerate";
    throw DegenerateSteadyState(os.str(), std::move(nulls));
  }

  // The SVD null vector is more accurate than the eigenvector for a single zero mode.
  Eigen::JacobiSVD<ComplexMatrix> svd(liouvillian, Eigen::ComputeFullV);
  const ComplexVector null = svd.matrixV().col(svd.matrixV().cols() - 1);
  ComplexMatrix rho = hermitian_part(devectorize(null, dim));
  const double tr = real_trace(rho);
  if (!(std::abs(tr) > 1e-14)) throw NumericalError("steady_state: null vector is traceless");
  return rho / tr;
}

LongestLived longest_lived_state(const ComplexMatrix& heff, double degeneracy_tol) {
  const Spectrum spectrum = eig_general(heff);
  double min_rate = std::numeric_limits<double>::infinity();
  for (const auto& l : spectrum.eigenvalues) min_rate = std::min(min_rate, -l.imag());

  LongestLived out;
  out.decay_rate = min_rate;
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    if (-spectrum.eigenvalues[k].imag() - min_rate <= degeneracy_tol) {
      const ComplexVector v = spectrum.right_eigenvectors.col(static_cast<Eigen::Index>(k));
      out.states.push_back(v * v.adjoint());
    }
  }
  return out;
}

}  // namespace nhme
