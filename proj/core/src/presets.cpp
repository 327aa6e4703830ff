#include <functional>
#include <map>

#include "nhme/experiment.hpp"

namespace nhme {

namespace {

// Strong-coupling parameter set shared by most figures.
ModelParams base_params() {
  ModelParams p;
  p.eps_h = 1.0;
  p.eps_c = 1.0;
  p.alpha_c = 0.2;
  p.alpha_h = 0.05;
  p.T_c = 0.1;
  p.T_h = 1.0;
  p.omega_c = 10.0;
  return p;
}

ExperimentConfig make(Experiment e, const std::string& name) {
  ExperimentConfig c;
  c.experiment = e;
  c.model = base_params();
  c.output_path = "out/" + name;
  return c;
}

ExperimentConfig fig2(Experiment e, const std::string& name) {
  ExperimentConfig c = make(e, name);
  c.model.alpha_c = 0.02;
  c.model.alpha_h = 0.005;
  c.spec = {Approach::local, JumpPolicy::none};
  c.time_grid = TimeGrid{20.0, 2000};
  c.g_grid = SweepAxis{0.22, 0.62, 2};
  return c;
}

ExperimentConfig fig4_thermo_like(Experiment e, const std::string& name, double t_max, std::size_t steps,
                                  JumpPolicy policy, SweepAxis axis) {
  ExperimentConfig c = make(e, name);
  c.model.g = 0.8;
  c.spec = {Approach::local, policy};
  c.time_grid = TimeGrid{t_max, steps};
  c.T_h_grid = axis;
  return c;
}

const std::map<std::string, std::function<ExperimentConfig()>, std::less<>>& registry() {
  static const std::map<std::string, std::function<ExperimentConfig()>, std::less<>> presets{
      {"fig2", [] { return fig2(Experiment::trace_decay, "fig2"); }},
      {"fig2b", [] { return fig2(Experiment::compare_lg_nh, "fig2b"); }},
      {"fig3",
       [] {
         ExperimentConfig c = make(Experiment::compare_lindblad_nh, "fig3");
         c.spec = {Approach::local, JumpPolicy::none};
         c.time_grid = TimeGrid{40.0, 800};
         c.g_grid = SweepAxis{0.03, 0.93, 4};
         return c;
       }},
      {"fig4",
       [] {
         ExperimentConfig c = make(Experiment::ep_scan, "fig4");
         c.spec = {Approach::local, JumpPolicy::full};
         c.target = EPTarget::heff;
         c.g_grid = SweepAxis{0.0, 0.6, 601};
         return c;
       }},
      {"fig4-thermo",
       [] {
         return fig4_thermo_like(Experiment::thermo, "fig4-thermo", 50.0, 1000, JumpPolicy::none,
                                 SweepAxis{0.59, 1.5, 2});
       }},
      {"fig5",
       [] {
         ExperimentConfig c = make(Experiment::nonnormality, "fig5");
         c.g_grid = SweepAxis{0.0, 2.2, 221};
         return c;
       }},
      {"fig6",
       [] {
         ExperimentConfig c = make(Experiment::ep_scan, "fig6");
         c.spec = {Approach::local, JumpPolicy::full};
         c.target = EPTarget::liouvillian;
         c.g_grid = SweepAxis{0.0, 2.2, 2201};
         return c;
       }},
      {"fig7",
       [] {
         return fig4_thermo_like(Experiment::relax_to_ss, "fig7", 40.0, 400, JumpPolicy::full,
                                 SweepAxis{0.15, 1.5, 4});
       }},
      {"fig7-nh",
       [] {
         return fig4_thermo_like(Experiment::relax_to_ss, "fig7-nh", 40.0, 400, JumpPolicy::none,
                                 SweepAxis{0.15, 1.5, 4});
       }},
      {"fig8",
       [] {
         ExperimentConfig c = make(Experiment::ep_scan, "fig8");
         c.model.alpha_c = 2e-4;
         c.model.alpha_h = 5e-5;
         c.model.omega_c = 20.0;
         c.spec = {Approach::local, JumpPolicy::full};
         c.target = EPTarget::heff;
         c.g_grid = SweepAxis{1e-5, 1e-3, 991};
         return c;
       }},
      {"fig9",
       [] {
         ExperimentConfig c = make(Experiment::nonnormality, "fig9");
         c.model.eps_c = 0.5;
         c.model.alpha_c = 2.0;
         c.model.alpha_h = 2.0;
         c.model.T_c = 0.05;
         c.model.T_h = 0.2;
         c.g_grid = SweepAxis{0.0, 2.2, 221};
         return c;
       }},
  };
  return presets;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : registry()) out.push_back(name);
  return out;
}

ExperimentConfig preset(std::string_view name) {
  const auto& r = registry();
  const auto it = r.find(name);
  if (it == r.end()) {
    std::string valid;
    for (const auto& n : preset_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw ConfigError("preset: unknown name \"" + std::string(name) + "\"; valid presets: " + valid);
  }
  return it->second();
}

}  // namespace nhme
