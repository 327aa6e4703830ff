// nhme: run two-qubit open-system experiments and write CSV.
//
//   nhme run config.json
//   nhme run --preset fig4 --override g_grid.n_points=1201
//   nhme presets [name]

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nhme/experiment.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

int run_command(const std::string& config_path, const std::string& preset_name,
                const std::vector<std::string>& overrides) {
  nhme::ExperimentConfig config;
  try {
    if (!config_path.empty() && !preset_name.empty()) {
      throw nhme::ConfigError("run: give either a config file or --preset, not both");
    }
    if (config_path.empty() && preset_name.empty()) {
      throw nhme::ConfigError("run: a config file or --preset is required");
    }
    config = preset_name.empty() ? nhme::load_config(config_path) : nhme::preset(preset_name);
    for (const auto& o : overrides) config = nhme::apply_override(config, o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    const auto result = nhme::run(config);
    for (const auto& f : result.files) std::cout << f.string() << '\n';
    if (config.experiment == nhme::Experiment::ep_scan) {
      std::cout << "accepted EPs: " << result.accepted_eps << '\n';
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure in " << nhme::to_string(config.experiment) << ": " << e.what() << '\n';
    return kNumericalError;
  }
  return 0;
}

int presets_command(const std::string& name) {
  if (name.empty()) {
    for (const auto& n : nhme::preset_names()) {
      const auto c = nhme::preset(n);
      std::cout << n << '\t' << nhme::to_string(c.experiment) << '\n';
    }
    return 0;
  }
  try {
    std::cout << nhme::to_json(nhme::preset(name));
  } catch (const nhme::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local, global and non-Hermitian two-qubit open-system experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset_name;
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "Run an experiment from a JSON config or a preset");
  run->add_option("config", config_path, "Experiment config (JSON)");
  run->add_option("--preset", preset_name, "Named preset, see `nhme presets`");
  run->add_option("--override", overrides, "key=value, e.g. model.g=0.3 (repeatable)");

  std::string show;
  auto* presets = app.add_subcommand("presets", "List presets, or print one as a JSON config");
  presets->add_option("name", show, "Preset to print");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  if (*run) return run_command(config_path, preset_name, overrides);
  return presets_command(show);
}
