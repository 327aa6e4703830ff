#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nhme/model.hpp"
#include "nhme/spectral.hpp"

namespace nhme {

/// Invalid configuration; the message names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Experiment {
  trace_decay,
  compare_lg_nh,
  compare_lindblad_nh,
  thermo,
  relax_to_ss,
  ep_scan,
  nonnormality,
};

std::string_view to_string(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view s);

struct TimeGrid {
  double t_max = 0.0;
  std::size_t n_steps = 0;
};

/// n_points values from min to max inclusive (a single point when n_points == 1).
struct SweepAxis {
  double min = 0.0;
  double max = 0.0;
  std::size_t n_points = 0;

  std::vector<double> values() const;
};

struct McConfig {
  std::size_t n_traj = 0;
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::trace_decay;
  ModelParams model;
  GeneratorSpec spec;
  EPTarget target = EPTarget::heff;  // ep-scan only
  std::optional<TimeGrid> time_grid;
  std::optional<SweepAxis> g_grid;
  std::optional<SweepAxis> T_h_grid;
  std::optional<McConfig> mc;
  EPThresholds thresholds;
  std::string output_path = "out";

  /// Throws ConfigError naming the field.
  void validate() const;
};

/// Parse a JSON document. Unknown keys are rejected.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Pretty-printed JSON that parse_config accepts unchanged.
std::string to_json(const ExperimentConfig& config);

/// Set a dotted key ("model.g", "g_grid.n_points", "spec.jump_policy") from
/// "key=value"; the value is read as JSON when possible, else as a string.
ExperimentConfig apply_override(const ExperimentConfig& config, std::string_view assignment);

std::vector<std::string> preset_names();
/// Throws ConfigError listing valid names for an unknown preset.
ExperimentConfig preset(std::string_view name);

struct RunResult {
  std::vector<std::filesystem::path> files;
  std::size_t accepted_eps = 0;  // ep-scan only
};

/// Run the experiment and write its CSV files into config.output_path.
RunResult run(const ExperimentConfig& config);

/// Numbers as written to CSV: 17 significant digits.
std::string format_number(double x);

}  // namespace nhme
