#include "nhme/experiment.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nhme/dynamics.hpp"
#include "nhme/metrics.hpp"

namespace nhme {

using json = nlohmann::ordered_json;

namespace {

constexpr std::array<std::pair<Experiment, std::string_view>, 7> kExperimentNames{{
    {Experiment::trace_decay, "trace-decay"},
    {Experiment::compare_lg_nh, "compare-lg-nh"},
    {Experiment::compare_lindblad_nh, "compare-lindblad-nh"},
    {Experiment::thermo, "thermo"},
    {Experiment::relax_to_ss, "relax-to-ss"},
    {Experiment::ep_scan, "ep-scan"},
    {Experiment::nonnormality, "nonnormality"},
}};

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw ConfigError(field + ": " + why);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<std::string_view> keys) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      fail(where.empty() ? key : where + "." + key, "unknown field");
    }
  }
}

const json& require_object(const json& parent, const std::string& key, const std::string& field) {
  if (!parent.contains(key)) fail(field, "missing");
  const json& v = parent.at(key);
  if (!v.is_object()) fail(field, "expected an object");
  return v;
}

double get_number(const json& obj, const std::string& key, const std::string& field) {
  if (!obj.contains(key)) fail(field, "missing");
  const json& v = obj.at(key);
  if (!v.is_number()) fail(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(field, "must be finite");
  return x;
}

std::uint64_t get_count(const json& obj, const std::string& key, const std::string& field) {
  if (!obj.contains(key)) fail(field, "missing");
  const json& v = obj.at(key);
  if (!v.is_number_unsigned()) fail(field, "expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& field) {
  if (!obj.contains(key)) fail(field, "missing");
  const json& v = obj.at(key);
  if (!v.is_string()) fail(field, "expected a string");
  return v.get<std::string>();
}

SweepAxis parse_axis(const json& parent, const std::string& key) {
  const json& a = require_object(parent, key, key);
  reject_unknown(a, key, {"min", "max", "n_points"});
  SweepAxis axis;
  axis.min = get_number(a, "min", key + ".min");
  axis.max = get_number(a, "max", key + ".max");
  axis.n_points = get_count(a, "n_points", key + ".n_points");
  return axis;
}

json axis_json(const SweepAxis& a) { return json{{"min", a.min}, {"max", a.max}, {"n_points", a.n_points}}; }

bool is_dynamics(Experiment e) {
  return e == Experiment::trace_decay || e == Experiment::compare_lg_nh ||
         e == Experiment::compare_lindblad_nh || e == Experiment::thermo || e == Experiment::relax_to_ss;
}

// ---------------------------------------------------------------- CSV output

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out_ << ',';
      out_ << cells[k];
    }
    out_ << '\n';
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

std::string num(double x) { return format_number(x); }

std::vector<double> sweep_values(const std::optional<SweepAxis>& axis, double fallback) {
  return axis ? axis->values() : std::vector<double>{fallback};
}

constexpr std::array<Approach, 2> kApproaches{Approach::local, Approach::global};

ComplexMatrix initial_state(const ModelParams& p) { return thermal_state(build_hamiltonian(p), p.T_h); }

// --------------------------------------------------------------- experiments

void run_trace_decay(const ExperimentConfig& c, const std::filesystem::path& dir, RunResult& result) {
  CsvWriter csv(dir / "trace_decay.csv", {"t", "approach", "g", "trace"});
  const auto times = uniform_grid(c.time_grid->t_max, c.time_grid->n_steps);
  for (const double g : sweep_values(c.g_grid, c.model.g)) {
    const ModelParams p = c.model.with_g(g);
    for (const Approach a : kApproaches) {
      const auto traj = propagate(build_liouvillian(p, {a, c.spec.jump_policy}).full, initial_state(p), times);
      for (std::size_t k = 0; k < traj.size(); ++k) {
        csv.row({num(traj.times[k]), std::string(to_string(a)), num(g), num(traj.traces[k])});
      }
    }
  }
  result.files.push_back(csv.path());
}

void run_compare_lg_nh(const ExperimentConfig& c, const std::filesystem::path& dir, RunResult& result) {
  CsvWriter csv(dir / "compare.csv", {"t", "approach_pair", "g", "trace_distance"});
  const auto times = uniform_grid(c.time_grid->t_max, c.time_grid->n_steps);
  for (const double g : sweep_values(c.g_grid, c.model.g)) {
    const ModelParams p = c.model.with_g(g);
    const ComplexMatrix rho0 = initial_state(p);
    const auto loc = propagate(build_liouvillian(p, {Approach::local, c.spec.jump_policy}).full, rho0, times);
    const auto glob = propagate(build_liouvillian(p, {Approach::global, c.spec.jump_policy}).full, rho0, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
      csv.row({num(times[k]), "local-global", num(g), num(normalized_output_distance(loc.states[k], glob.states[k]))});
    }
  }
  result.files.push_back(csv.path());
}

void run_compare_lindblad_nh(const ExperimentConfig& c, const std::filesystem::path& dir, RunResult& result) {
  CsvWriter csv(dir / "compare.csv", {"t", "approach_pair", "g", "trace_distance"});
  const auto times = uniform_grid(c.time_grid->t_max, c.time_grid->n_steps);
  for (const double g : sweep_values(c.g_grid, c.model.g)) {
    const ModelParams p = c.model.with_g(g);
    const ComplexMatrix rho0 = initial_state(p);
    for (const Approach a : kApproaches) {
      const std::string name(to_string(a));
      const auto lindblad = propagate(build_liouvillian(p, {a, JumpPolicy::full}).full, rho0, times);
      const auto nh = propagate(build_liouvillian(p, {a, c.spec.jump_policy}).full, rho0, times);
      for (std::size_t k = 0; k < times.size(); ++k) {
        csv.row({num(times[k]), name + ":lindblad-nh", num(g),
                 num(normalized_output_distance(lindblad.states[k], nh.states[k]))});
      }
      if (c.mc) {
        const auto mc = mc_unraveling(p, {a, JumpPolicy::full}, rho0, times, c.mc->n_traj, c.mc->seed, {});
        for (std::size_t k = 0; k < times.size(); ++k) {
          csv.row({num(times[k]), name + ":mc-lindblad", num(g),
                   num(trace_distance(mc.mean_state_per_time[k], lindblad.states[k]))});
        }
      }
    }
  }
  result.files.push_back(csv.path());
}

void run_thermo(const ExperimentConfig& c, const std::filesystem::path& dir, RunResult& result) {
  CsvWriter csv(dir / "thermo.csv",
                {"approach", "T_h", "time", "S_vN", "S_nH", "S_nH_rate_eq16", "S_nH_rate_eq17",
                 "entropy_production_rate_lindblad", "heat_rate_hot", "heat_rate_cold",
                 "entropy_production_lindblad_integrated", "flagged"});
  const auto times = uniform_grid(c.time_grid->t_max, c.time_grid->n_steps);
  for (const double T_h : sweep_values(c.T_h_grid, c.model.T_h)) {
    const ModelParams p = c.model.with_T_h(T_h);
    const ComplexMatrix h = build_hamiltonian(p);
    const ComplexMatrix rho0 = thermal_state(h, T_h);
    for (const Approach a : kApproaches) {
      const auto terms = dissipation_terms(p, a);
      const ComplexMatrix gamma = build_gamma(terms);
      const Liouvillian lindblad = build_liouvillian(h, terms, JumpPolicy::full);
      const ComplexMatrix hot = bath_dissipator(terms, Bath::hot);
      const ComplexMatrix cold = bath_dissipator(terms, Bath::cold);
      const auto omega = propagate(build_liouvillian(h, terms, JumpPolicy::none).full, rho0, times);
      const auto rho_nh = normalize(omega);
      const auto rho_l = propagate(lindblad.full, rho0, times);

      double integrated = 0.0;
      double previous_rate = 0.0;
      for (std::size_t k = 0; k < times.size(); ++k) {
        ThermoRecord r;
        r.time = times[k];
        r.S_vN = vn_entropy(rho_nh.states[k]);
        r.S_nH = nh_entropy(rho_nh.states[k], omega.states[k]);
        const auto rates = nh_entropy_rate(rho_nh.states[k], omega.states[k], h, gamma);
        r.S_nH_rate_eq16 = rates.eq16;
        r.S_nH_rate_eq17 = rates.eq17;
        const auto ep = lindblad_entropy_production(rho_l.states[k], lindblad.full, hot, cold, h, T_h, p.T_c);
        r.entropy_production_rate_lindblad = ep.rate;
        r.heat_rate_hot = ep.heat_hot;
        r.heat_rate_cold = ep.heat_cold;
        r.flagged = ep.flagged;
        if (k > 0) integrated += 0.5 * (previous_rate + ep.rate) * (times[k] - times[k - 1]);
        previous_rate = ep.rate;
        csv.row({std::string(to_string(a)), num(T_h), num(r.time), num(r.S_vN), num(r.S_nH),
                 num(r.S_nH_rate_eq16), num(r.S_nH_rate_eq17), num(r.entropy_production_rate_lindblad),
                 num(r.heat_rate_hot), num(r.heat_rate_cold), num(integrated), r.flagged ? "1" : "0"});
      }
    }
  }
  result.files.push_back(csv.path());
}

void run_relax_to_ss(const ExperimentConfig& c, const std::filesystem::path& dir, RunResult& result) {
  CsvWriter csv(dir / "relax.csv", {"t", "approach", "T_h", "trace_distance"});
  const auto times = uniform_grid(c.time_grid->t_max, c.time_grid->n_steps);
  const bool lindblad = c.spec.jump_policy == JumpPolicy::full;
  for (const double T_h : sweep_values(c.T_h_grid, c.model.T_h)) {
    const ModelParams p = c.model.with_T_h(T_h);
    const ComplexMatrix rho0 = initial_state(p);
    for (const Approach a : kApproaches) {
      const ComplexMatrix l = build_liouvillian(p, {a, c.spec.jump_policy}).full;
      const auto traj = normalize(propagate(l, rho0, times));
      std::vector<ComplexMatrix> targets;
      if (lindblad) {
        targets.push_back(steady_state(l));
      } else {
        targets = longest_lived_state(effective_hamiltonian(p, a)).states;
      }
      for (std::size_t k = 0; k < traj.size(); ++k) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& s : targets) d = std::min(d, trace_distance(traj.states[k], s));
        csv.row({num(traj.times[k]), std::string(to_string(a)), num(T_h), num(d)});
      }
    }
  }
  result.files.push_back(csv.path());
}

std::vector<std::string> ep_row(const EPReport& r) {
  return {num(r.g_star),
          std::string(to_string(r.spec.approach)),
          std::string(to_string(r.spec.jump_policy)),
          std::string(to_string(r.target)),
          std::to_string(r.coalescing_indices.first),
          std::to_string(r.coalescing_indices.second),
          num(r.eigenvalue.real()),
          num(r.eigenvalue.imag()),
          num(r.kappa_at_peak),
          num(r.gap_at_peak),
          num(r.nonorthogonality_at_peak),
          r.filtered ? "1" : "0"};
}

void run_ep_scan(const ExperimentConfig& c, const std::filesystem::path& dir, RunResult& result) {
  const auto grid = c.g_grid->values();
  const auto sweep = eigen_track(generator_family(c.model, c.spec, c.target), grid);
  const std::size_t n = c.target == EPTarget::heff ? 4 : 16;

  std::vector<std::string> header{"g", "kappa_V", "min_gap", "min_nonorth"};
  for (const char* part : {"re_lambda_", "im_lambda_", "abs_lambda_"}) {
    for (std::size_t i = 1; i <= n; ++i) header.push_back(part + std::to_string(i));
  }
  CsvWriter csv(dir / "ep_scan.csv", header);
  for (const auto& pt : sweep) {
    std::vector<std::string> row{num(pt.g), num(pt.kappa_V), num(pt.min_gap), num(pt.min_pair_nonorthogonality)};
    for (std::size_t i = 0; i < n; ++i) row.push_back(num(i < pt.eigenvalues.size() ? pt.eigenvalues[i].real() : NAN));
    for (std::size_t i = 0; i < n; ++i) row.push_back(num(i < pt.eigenvalues.size() ? pt.eigenvalues[i].imag() : NAN));
    for (std::size_t i = 0; i < n; ++i) row.push_back(num(i < pt.eigenvalue_moduli.size() ? pt.eigenvalue_moduli[i] : NAN));
    csv.row(row);
  }
  result.files.push_back(csv.path());

  const auto reports = ep_scan(c.model, c.spec, c.target, grid, c.thresholds);
  const std::vector<std::string> ep_header{"g_star", "approach", "jump_policy", "target", "i", "j",
                                           "re_lambda", "im_lambda", "kappa", "gap", "nonorthogonality",
                                           "filtered"};
  CsvWriter eps(dir / "eps.csv", ep_header);
  CsvWriter all(dir / "ep_candidates.csv", ep_header);
  for (const auto& r : reports) {
    all.row(ep_row(r));
    if (!r.filtered) {
      eps.row(ep_row(r));
      ++result.accepted_eps;
    }
  }
  result.files.push_back(eps.path());
  result.files.push_back(all.path());
}

void run_nonnormality(const ExperimentConfig& c, const std::filesystem::path& dir, RunResult& result) {
  CsvWriter csv(dir / "nonnormality.csv", {"g", "approach", "N_L", "N_D", "HD_contribution", "HGamma_norm"});
  for (const double g : c.g_grid->values()) {
    for (const Approach a : kApproaches) {
      const auto d = commutator_diagnostics(c.model.with_g(g), {a, c.spec.jump_policy});
      csv.row({num(g), std::string(to_string(a)), num(d.L_nonnormality), num(d.DD_nonnormality),
               num(d.HD_contribution), num(d.HGamma_norm)});
    }
  }
  result.files.push_back(csv.path());
}

}  // namespace

std::string_view to_string(Experiment e) {
  for (const auto& [value, name] : kExperimentNames) {
    if (value == e) return name;
  }
  return "?";
}

std::optional<Experiment> parse_experiment(std::string_view s) {
  for (const auto& [value, name] : kExperimentNames) {
    if (name == s) return value;
  }
  return std::nullopt;
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> out(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    out[k] = n_points == 1 ? min : min + (max - min) * static_cast<double>(k) / static_cast<double>(n_points - 1);
  }
  if (n_points > 1) out.back() = max;
  return out;
}

void ExperimentConfig::validate() const {
  try {
    model.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (g_grid && T_h_grid) fail("g_grid", "only one sweep axis (g_grid or T_h_grid) may be given");
  for (const auto& [axis, name] : {std::pair{&g_grid, "g_grid"}, std::pair{&T_h_grid, "T_h_grid"}}) {
    if (!*axis) continue;
    const SweepAxis& a = **axis;
    const std::string f(name);
    if (a.n_points == 0) fail(f + ".n_points", "must be at least 1");
    if (a.n_points > 1 && !(a.max > a.min)) fail(f + ".max", "must exceed min");
    if (f == "g_grid" && a.min < 0.0) fail(f + ".min", "coupling must be >= 0");
    if (f == "T_h_grid" && !(a.min > 0.0)) fail(f + ".min", "temperature must be > 0");
  }
  if (is_dynamics(experiment)) {
    if (!time_grid) fail("time_grid", "required for " + std::string(to_string(experiment)));
    if (!(time_grid->t_max > 0.0)) fail("time_grid.t_max", "must be > 0");
    if (time_grid->n_steps == 0) fail("time_grid.n_steps", "must be at least 1");
  }
  switch (experiment) {
    case Experiment::trace_decay:
    case Experiment::compare_lg_nh:
    case Experiment::compare_lindblad_nh:
      if (T_h_grid) fail("T_h_grid", "this experiment sweeps g; use g_grid");
      if (experiment == Experiment::compare_lindblad_nh && spec.jump_policy == JumpPolicy::full) {
        fail("spec.jump_policy", "compare-lindblad-nh needs a policy that drops jumps");
      }
      break;
    case Experiment::thermo:
      if (g_grid) fail("g_grid", "thermo sweeps T_h; use T_h_grid");
      if (spec.jump_policy != JumpPolicy::none) fail("spec.jump_policy", "thermo requires \"none\"");
      break;
    case Experiment::relax_to_ss:
      if (g_grid) fail("g_grid", "relax-to-ss sweeps T_h; use T_h_grid");
      if (spec.jump_policy != JumpPolicy::full && spec.jump_policy != JumpPolicy::none) {
        fail("spec.jump_policy", "relax-to-ss supports \"full\" or \"none\"");
      }
      break;
    case Experiment::ep_scan:
    case Experiment::nonnormality:
      if (!g_grid) fail("g_grid", "required for " + std::string(to_string(experiment)));
      if (g_grid->n_points < 3) fail("g_grid.n_points", "a g sweep needs at least 3 points");
      break;
  }
  if (mc) {
    if (mc->n_traj == 0) fail("mc.n_traj", "must be at least 1");
  }
  if (!(thresholds.gap_tol > 0.0)) fail("thresholds.gap_tol", "must be > 0");
  if (!(thresholds.orth_tol > 0.0)) fail("thresholds.orth_tol", "must be > 0");
  if (!(thresholds.kappa_min >= 1.0)) fail("thresholds.kappa_min", "must be >= 1");
  if (output_path.empty()) fail("output_path", "must not be empty");
}

ExperimentConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON (") + e.what() + ")");
  }
  if (!doc.is_object()) fail("config", "top level must be an object");
  reject_unknown(doc, "", {"experiment", "model", "spec", "target", "time_grid", "g_grid", "T_h_grid", "mc",
                           "thresholds", "output_path"});

  ExperimentConfig c;
  const std::string exp = get_string(doc, "experiment", "experiment");
  const auto e = parse_experiment(exp);
  if (!e) fail("experiment", "unknown experiment \"" + exp + "\"");
  c.experiment = *e;

  const json& m = require_object(doc, "model", "model");
  reject_unknown(m, "model", {"eps_h", "eps_c", "g", "alpha_h", "alpha_c", "T_h", "T_c", "omega_c"});
  c.model.eps_h = get_number(m, "eps_h", "model.eps_h");
  c.model.eps_c = get_number(m, "eps_c", "model.eps_c");
  c.model.g = get_number(m, "g", "model.g");
  c.model.alpha_h = get_number(m, "alpha_h", "model.alpha_h");
  c.model.alpha_c = get_number(m, "alpha_c", "model.alpha_c");
  c.model.T_h = get_number(m, "T_h", "model.T_h");
  c.model.T_c = get_number(m, "T_c", "model.T_c");
  c.model.omega_c = get_number(m, "omega_c", "model.omega_c");

  if (doc.contains("spec")) {
    const json& s = require_object(doc, "spec", "spec");
    reject_unknown(s, "spec", {"approach", "jump_policy"});
    if (s.contains("approach")) {
      const std::string a = get_string(s, "approach", "spec.approach");
      const auto parsed = parse_approach(a);
      if (!parsed) fail("spec.approach", "expected \"local\" or \"global\", got \"" + a + "\"");
      c.spec.approach = *parsed;
    }
    if (s.contains("jump_policy")) {
      const std::string j = get_string(s, "jump_policy", "spec.jump_policy");
      const auto parsed = parse_jump_policy(j);
      if (!parsed) {
        fail("spec.jump_policy", "expected full, none, postselect_cold or postselect_hot, got \"" + j + "\"");
      }
      c.spec.jump_policy = *parsed;
    }
  }
  if (doc.contains("target")) {
    const std::string t = get_string(doc, "target", "target");
    const auto parsed = parse_ep_target(t);
    if (!parsed) fail("target", "expected \"heff\" or \"liouvillian\", got \"" + t + "\"");
    c.target = *parsed;
  }
  if (doc.contains("time_grid")) {
    const json& t = require_object(doc, "time_grid", "time_grid");
    reject_unknown(t, "time_grid", {"t_max", "n_steps"});
    c.time_grid = TimeGrid{get_number(t, "t_max", "time_grid.t_max"), get_count(t, "n_steps", "time_grid.n_steps")};
  }
  if (doc.contains("g_grid")) c.g_grid = parse_axis(doc, "g_grid");
  if (doc.contains("T_h_grid")) c.T_h_grid = parse_axis(doc, "T_h_grid");
  if (doc.contains("mc")) {
    const json& mc = require_object(doc, "mc", "mc");
    reject_unknown(mc, "mc", {"n_traj", "seed"});
    c.mc = McConfig{get_count(mc, "n_traj", "mc.n_traj"), get_count(mc, "seed", "mc.seed")};
  }
  if (doc.contains("thresholds")) {
    const json& th = require_object(doc, "thresholds", "thresholds");
    reject_unknown(th, "thresholds", {"gap_tol", "orth_tol", "kappa_min"});
    if (th.contains("gap_tol")) c.thresholds.gap_tol = get_number(th, "gap_tol", "thresholds.gap_tol");
    if (th.contains("orth_tol")) c.thresholds.orth_tol = get_number(th, "orth_tol", "thresholds.orth_tol");
    if (th.contains("kappa_min")) c.thresholds.kappa_min = get_number(th, "kappa_min", "thresholds.kappa_min");
  }
  if (doc.contains("output_path")) c.output_path = get_string(doc, "output_path", "output_path");

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string to_json(const ExperimentConfig& c) {
  json doc;
  doc["experiment"] = std::string(to_string(c.experiment));
  doc["model"] = json{{"eps_h", c.model.eps_h},     {"eps_c", c.model.eps_c}, {"g", c.model.g},
                      {"alpha_h", c.model.alpha_h}, {"alpha_c", c.model.alpha_c}, {"T_h", c.model.T_h},
                      {"T_c", c.model.T_c},         {"omega_c", c.model.omega_c}};
  doc["spec"] = json{{"approach", std::string(to_string(c.spec.approach))},
                     {"jump_policy", std::string(to_string(c.spec.jump_policy))}};
  if (c.experiment == Experiment::ep_scan) doc["target"] = std::string(to_string(c.target));
  if (c.time_grid) doc["time_grid"] = json{{"t_max", c.time_grid->t_max}, {"n_steps", c.time_grid->n_steps}};
  if (c.g_grid) doc["g_grid"] = axis_json(*c.g_grid);
  if (c.T_h_grid) doc["T_h_grid"] = axis_json(*c.T_h_grid);
  if (c.mc) doc["mc"] = json{{"n_traj", c.mc->n_traj}, {"seed", c.mc->seed}};
  doc["thresholds"] = json{{"gap_tol", c.thresholds.gap_tol},
                           {"orth_tol", c.thresholds.orth_tol},
                           {"kappa_min", c.thresholds.kappa_min}};
  doc["output_path"] = c.output_path;
  return doc.dump(2) + "\n";
}

ExperimentConfig apply_override(const ExperimentConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override: expected key=value, got \"" + std::string(assignment) + "\"");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }

  json doc = json::parse(to_json(config));
  json* node = &doc;
  std::string_view rest = key;
  while (true) {
    const auto dot = rest.find('.');
    const std::string part(rest.substr(0, dot));
    if (dot == std::string_view::npos) {
      (*node)[part] = value;
      break;
    }
    if (!node->contains(part)) (*node)[part] = json::object();
    node = &(*node)[part];
    if (!node->is_object()) fail(key, "cannot descend into a non-object");
    rest.remove_prefix(dot + 1);
  }
  // A newly given sweep axis replaces the other one.
  if (key.rfind("g_grid", 0) == 0) doc.erase("T_h_grid");
  if (key.rfind("T_h_grid", 0) == 0) doc.erase("g_grid");
  return parse_config(doc.dump());
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

RunResult run(const ExperimentConfig& config) {
  config.validate();
  const std::filesystem::path dir(config.output_path);
  std::filesystem::create_directories(dir);

  RunResult result;
  switch (config.experiment) {
    case Experiment::trace_decay: run_trace_decay(config, dir, result); break;
    case Experiment::compare_lg_nh: run_compare_lg_nh(config, dir, result); break;
    case Experiment::compare_lindblad_nh: run_compare_lindblad_nh(config, dir, result); break;
    case Experiment::thermo: run_thermo(config, dir, result); break;
    case Experiment::relax_to_ss: run_relax_to_ss(config, dir, result); break;
    case Experiment::ep_scan: run_ep_scan(config, dir, result); break;
    case Experiment::nonnormality: run_nonnormality(config, dir, result); break;
  }
  return result;
}

}  // namespace nhme
