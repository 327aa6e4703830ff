#include "nhme/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace nhme {

namespace {

/// Golden-section minimisation of f on [a, b] down to width tol.
template <typename F>
double golden_min(F&& f, double a, double b, double tol) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
    if (c >= d) break;  // bracket below resolution
  }
  return fc < fd ? c : d;
}

PairAnalysis analyse_spectrum(const Spectrum& s, double orth_tol) {
  PairAnalysis out;
  out.kappa = s.condition_number;
  const Eigen::MatrixXd overlap = (s.right_eigenvectors.adjoint() * s.right_eigenvectors).cwiseAbs2();
  double best_gap = std::numeric_limits<double>::infinity();
  double most_parallel = std::numeric_limits<double>::infinity();
  std::size_t pi = 0, pj = 0;
  bool found = false;
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double no = std::max(0.0, 1.0 - overlap(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      const double gap = std::abs(s.eigenvalues[i] - s.eigenvalues[j]);
      if (no < most_parallel) {
        most_parallel = no;
        pi = i;
        pj = j;
      }
      if (no <= orth_tol && gap < best_gap) {
        best_gap = gap;
        out.i = i;
        out.j = j;
        out.nonorthogonality = no;
        found = true;
      }
    }
  }
  if (!found) {
    out.i = pi;
    out.j = pj;
    out.nonorthogonality = std::min(1.0, most_parallel);
  }
  if (n >= 2) {
    out.gap = std::abs(s.eigenvalues[out.i] - s.eigenvalues[out.j]);
    out.eigenvalue = 0.5 * (s.eigenvalues[out.i] + s.eigenvalues[out.j]);
  }
  return out;
}

}  // namespace

double nonnormality(const ComplexMatrix& m) {
  const double n2 = m.squaredNorm();
  if (n2 == 0.0) return 0.0;
  return commutator(m, m.adjoint()).norm() / n2;
}

CommutatorDiagnostics commutator_diagnostics(const ModelParams& p, const GeneratorSpec& spec) {
  p.validate();
  const ComplexMatrix h = build_hamiltonian(p);
  const auto terms = dissipation_terms(p, spec.approach);
  const ComplexMatrix gamma = build_gamma(terms);
  const Liouvillian l = build_liouvillian(h, terms, spec.jump_policy);

  CommutatorDiagnostics out;
  out.HGamma_norm = commutator(h, gamma).norm();
  const double scale = l.unitary.norm() * l.dissipative.norm();
  out.HD_contribution = scale > 0.0 ? commutator(l.unitary, l.dissipative).norm() / scale : 0.0;
  out.DD_nonnormality = nonnormality(l.dissipative);
  out.L_nonnormality = nonnormality(l.full);
  return out;
}

std::vector<std::size_t> max_weight_assignment(const Eigen::MatrixXd& weight) {
  if (weight.rows() != weight.cols()) {
    throw std::invalid_argument("max_weight_assignment: weight matrix must be square");
  }
  // Shortest augmenting path Hungarian method on cost = max - weight, 1-based potentials.
  const auto n = static_cast<std::size_t>(weight.rows());
  const double top = n ? weight.maxCoeff() : 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  auto cost = [&](std::size_t i, std::size_t j) {
    return top - weight(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1));
  };
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> perm(n);
  for (std::size_t j = 1; j <= n; ++j) perm[p[j] - 1] = j - 1;
  return perm;
}

std::vector<SweepPoint> eigen_track(const GeneratorFamily& family, const std::vector<double>& g_grid) {
  if (g_grid.size() < 3) throw std::invalid_argument("eigen_track: need at least 3 grid points");
  for (std::size_t k = 1; k < g_grid.size(); ++k) {
    if (!(g_grid[k] > g_grid[k - 1])) {
      throw std::invalid_argument("eigen_track: g grid must be strictly increasing");
    }
  }

  std::vector<SweepPoint> out;
  out.reserve(g_grid.size());
  ComplexMatrix previous;  // tracked eigenvectors of the last good point
  for (const double g : g_grid) {
    SweepPoint pt;
    pt.g = g;
    Spectrum s;
    try {
      s = eig_general(family(g));
    } catch (const NumericalError&) {
      pt.ok = false;
      pt.kappa_V = std::numeric_limits<double>::quiet_NaN();
      pt.min_gap = std::numeric_limits<double>::quiet_NaN();
      pt.min_pair_nonorthogonality = std::numeric_limits<double>::quiet_NaN();
      if (!out.empty()) {
        pt.eigenvalues.assign(out.back().eigenvalues.size(), Complex(std::nan(""), std::nan("")));
        pt.eigenvalue_moduli.assign(out.back().eigenvalues.size(), std::nan(""));
      }
      out.push_back(pt);
      continue;
    }
    const auto n = static_cast<Eigen::Index>(s.size());

    std::vector<std::size_t> order(s.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (previous.size() != 0 && previous.cols() == n) {
      const Eigen::MatrixXd overlap = (previous.adjoint() * s.right_eigenvectors).cwiseAbs2();
      // Greedy: repeatedly take the largest remaining overlap.
      std::vector<char> row_used(s.size(), 0), col_used(s.size(), 0);
      bool ambiguous = false;
      for (Eigen::Index step = 0; step < n; ++step) {
        double best = -1.0;
        Eigen::Index bi = 0, bj = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (row_used[static_cast<std::size_t>(i)]) continue;
          for (Eigen::Index j = 0; j < n; ++j) {
            if (col_used[static_cast<std::size_t>(j)]) continue;
            if (overlap(i, j) > best) {
              best = overlap(i, j);
              bi = i;
              bj = j;
            }
          }
        }
        row_used[static_cast<std::size_t>(bi)] = 1;
        col_used[static_cast<std::size_t>(bj)] = 1;
        order[static_cast<std::size_t>(bi)] = static_cast<std::size_t>(bj);
      }
      // A branch competing for two columns above 0.5 makes greedy unreliable.
      for (Eigen::Index i = 0; i < n && !ambiguous; ++i) {
        int strong = 0;
        for (Eigen::Index j = 0; j < n; ++j) strong += overlap(i, j) > 0.5;
        ambiguous = strong > 1;
      }
      if (ambiguous) order = max_weight_assignment(overlap);
    }

    ComplexMatrix tracked(n, n);
    pt.eigenvalues.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      pt.eigenvalues[i] = s.eigenvalues[order[i]];
      tracked.col(static_cast<Eigen::Index>(i)) = s.right_eigenvectors.col(static_cast<Eigen::Index>(order[i]));
    }
    previous = tracked;

    pt.kappa_V = s.condition_number;
    const Eigen::MatrixXd overlap = (tracked.adjoint() * tracked).cwiseAbs2();
    pt.min_gap = std::numeric_limits<double>::infinity();
    pt.min_pair_nonorthogonality = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        pt.min_gap = std::min(pt.min_gap, std::abs(pt.eigenvalues[static_cast<std::size_t>(i)] -
                                                   pt.eigenvalues[static_cast<std::size_t>(j)]));
        pt.min_pair_nonorthogonality =
            std::min(pt.min_pair_nonorthogonality, std::clamp(1.0 - overlap(i, j), 0.0, 1.0));
      }
    }
    for (const auto& l : pt.eigenvalues) pt.eigenvalue_moduli.push_back(std::abs(l));
    out.push_back(std::move(pt));
  }
  return out;
}

std::string_view to_string(EPTarget t) { return t == EPTarget::heff ? "heff" : "liouvillian"; }

std::optional<EPTarget> parse_ep_target(std::string_view s) {
  if (s == "heff") return EPTarget::heff;
  if (s == "liouvillian") return EPTarget::liouvillian;
  return std::nullopt;
}

GeneratorFamily generator_family(const ModelParams& p, const GeneratorSpec& spec, EPTarget target) {
  if (target == EPTarget::heff) {
    return [p, spec](double g) { return effective_hamiltonian(p.with_g(g), spec.approach); };
  }
  return [p, spec](double g) { return build_liouvillian(p.with_g(g), spec).full; };
}

PairAnalysis analyse_pairs(const ComplexMatrix& m, double orth_tol) {
  return analyse_spectrum(eig_general(m), orth_tol);
}

EPReport ep_refine(const GeneratorFamily& family, double g_lo, double g_hi,
                   const EPThresholds& thresholds, double tol) {
  if (!(g_hi > g_lo)) throw std::invalid_argument("ep_refine: need g_lo < g_hi");
  if (tol <= 0.0) tol = std::min(1e-6, 1e-3 * (g_hi - g_lo));

  auto kappa_at = [&](double g) { return eig_general(family(g)).condition_number; };
  auto neg_log_kappa = [&](double g) { return -std::log(kappa_at(g)); };
  const double x = golden_min(neg_log_kappa, g_lo, g_hi, tol);

  // kappa alone leaves |g - g*| ~ tol; minimise the coalescing-pair gap next.
  auto pair_gap = [&](double g) { return analyse_pairs(family(g), thresholds.orth_tol).gap; };
  const double a = std::max(g_lo, x - 4.0 * tol);
  const double b = std::min(g_hi, x + 4.0 * tol);
  const double ulp = std::nextafter(std::abs(x), std::numeric_limits<double>::infinity()) - std::abs(x);
  const double y = golden_min(pair_gap, a, b, std::max(4.0 * ulp, std::numeric_limits<double>::min()));

  const PairAnalysis at = analyse_pairs(family(y), thresholds.orth_tol);
  EPReport r;
  r.g_star = y;
  r.coalescing_indices = {at.i, at.j};
  r.eigenvalue = at.eigenvalue;
  r.kappa_at_peak = at.kappa;
  r.gap_at_peak = at.gap;
  r.nonorthogonality_at_peak = at.nonorthogonality;

  // No interior maximum: the endpoints are at least as ill-conditioned.
  const bool interior = at.kappa > kappa_at(g_lo) && at.kappa > kappa_at(g_hi);
  r.filtered = !interior;
  if (interior) r = peak_filter({r}, thresholds).front();
  return r;
}

std::vector<EPReport> peak_filter(std::vector<EPReport> reports, const EPThresholds& thresholds) {
  for (auto& r : reports) {
    const bool pass = r.gap_at_peak <= thresholds.gap_tol &&
                      r.nonorthogonality_at_peak <= thresholds.orth_tol &&
                      r.kappa_at_peak >= thresholds.kappa_min;
    if (!pass) r.filtered = true;
  }
  return reports;
}

std::vector<EPReport> ep_scan(const ModelParams& p, const GeneratorSpec& spec, EPTarget target,
                              const std::vector<double>& g_grid, const EPThresholds& thresholds) {
  if (g_grid.size() < 3) throw std::invalid_argument("ep_scan: need at least 3 grid points");
  for (std::size_t k = 1; k < g_grid.size(); ++k) {
    if (!(g_grid[k] > g_grid[k - 1])) throw std::invalid_argument("ep_scan: g grid must be strictly increasing");
  }
  p.validate();
  const GeneratorFamily family = generator_family(p, spec, target);

  std::vector<double> kappa(g_grid.size());
  for (std::size_t k = 0; k < g_grid.size(); ++k) {
    kappa[k] = eig_general(family(g_grid[k])).condition_number;
  }

  std::vector<EPReport> out;
  for (std::size_t k = 1; k + 1 < g_grid.size(); ++k) {
    if (!(kappa[k] > kappa[k - 1] && kappa[k] >= kappa[k + 1])) continue;
    EPReport r = ep_refine(family, g_grid[k - 1], g_grid[k + 1], thresholds);
    r.spec = spec;
    r.target = target;
    out.push_back(r);
  }
  return out;
}

std::vector<EPReport> accepted(const std::vector<EPReport>& reports) {
  std::vector<EPReport> out;
  std::copy_if(reports.begin(), reports.end(), std::back_inserter(out),
               [](const EPReport& r) { return !r.filtered; });
  return out;
}

std::vector<double> perturbation_response(const ComplexMatrix& m, const ComplexMatrix& perturbation,
                                          const std::vector<double>& eps) {
  const Spectrum base = eig_general(m);
  std::vector<double> out;
  out.reserve(eps.size());
  for (const double e : eps) {
    const Spectrum moved = eig_general(m + e * perturbation);
    double shift = 0.0;
    for (const auto& l : moved.eigenvalues) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& l0 : base.eigenvalues) nearest = std::min(nearest, std::abs(l - l0));
      shift = std::max(shift, nearest);
    }
    out.push_back(shift);
  }
  return out;
}

double response_exponent(const std::vector<double>& eps, const std::vector<double>& shifts) {
  if (eps.size() != shifts.size() || eps.size() < 2) {
    throw std::invalid_argument("response_exponent: need matching samples, at least two");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(eps.size());
  for (std::size_t k = 0; k < eps.size(); ++k) {
    const double x = std::log(eps[k]);
    const double y = std::log(shifts[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace nhme
