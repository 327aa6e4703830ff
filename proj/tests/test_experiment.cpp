#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include "nhme/experiment.hpp"

using namespace nhme;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nhme_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

std::string error_of(const std::string& json_text) {
  try {
    parse_config(json_text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kMinimal = R"({
  "experiment": "trace-decay",
  "model": {"eps_h": 1, "eps_c": 1, "g": 0, "alpha_h": 0.05, "alpha_c": 0.2, "T_h": 1, "T_c": 0.1, "omega_c": 10},
  "spec": {"approach": "local", "jump_policy": "none"},
  "time_grid": {"t_max": 2, "n_steps": 20},
  "g_grid": {"min": 0.1, "max": 0.5, "n_points": 2},
  "output_path": "OUT"
})";

std::string minimal(const fs::path& out) {
  std::string s = kMinimal;
  s.replace(s.find("OUT"), 3, out.string());
  return s;
}

}  // namespace

TEST(Config, ParsesMinimalDocument) {
  const auto c = parse_config(minimal("x"));
  EXPECT_EQ(c.experiment, Experiment::trace_decay);
  EXPECT_EQ(c.spec.jump_policy, JumpPolicy::none);
  ASSERT_TRUE(c.g_grid.has_value());
  EXPECT_EQ(c.g_grid->values(), (std::vector<double>{0.1, 0.5}));
  EXPECT_EQ(c.output_path, "x");
}

TEST(Config, ErrorsNameTheField) {
  std::string s = minimal("x");
  EXPECT_NE(error_of(std::string(s).replace(s.find("\"n_points\": 2"), 13, "\"n_points\": 0")).find("g_grid.n_points"),
            std::string::npos);
  EXPECT_NE(error_of(std::string(s).replace(s.find("\"none\""), 6, "\"some\"")).find("spec.jump_policy"),
            std::string::npos);
  EXPECT_NE(error_of(std::string(s).replace(s.find("\"T_c\": 0.1"), 10, "\"T_c\": -1")).find("T_c"),
            std::string::npos);
  EXPECT_NE(error_of(std::string(s).replace(s.find("\"eps_h\""), 7, "\"eps_x\"")).find("model.eps_x"),
            std::string::npos);
  EXPECT_NE(error_of(std::string(s).replace(s.find("\"n_steps\": 20"), 13, "\"n_steps\": 2.5")).find("time_grid.n_steps"),
            std::string::npos);
  EXPECT_NE(error_of("[1, 2]").find("config"), std::string::npos);
  EXPECT_NE(error_of("{not json").find("invalid JSON"), std::string::npos);
}

TEST(Config, ExperimentConstraints) {
  ExperimentConfig c = preset("fig4");
  c.g_grid->n_points = 2;
  EXPECT_THROW(c.validate(), ConfigError);
  c = preset("fig4-thermo");
  c.spec.jump_policy = JumpPolicy::full;
  EXPECT_THROW(c.validate(), ConfigError);
  c = preset("fig3");
  c.spec.jump_policy = JumpPolicy::full;
  EXPECT_THROW(c.validate(), ConfigError);
  c = preset("fig2");
  c.T_h_grid = SweepAxis{0.5, 1.0, 2};
  EXPECT_THROW(c.validate(), ConfigError);
  c = preset("fig2");
  c.time_grid.reset();
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Presets, RoundTripThroughJson) {
  for (const auto& name : preset_names()) {
    const ExperimentConfig c = preset(name);
    EXPECT_NO_THROW(c.validate()) << name;
    const std::string text = to_json(c);
    EXPECT_EQ(to_json(parse_config(text)), text) << name;
  }
}

TEST(Presets, WeakCouplingEpParameters) {
  const auto c = preset("fig8");
  EXPECT_EQ(c.model.alpha_c, 2e-4);
  EXPECT_EQ(c.model.alpha_h, 5e-5);
  EXPECT_EQ(c.model.T_c, 0.1);
  EXPECT_EQ(c.model.T_h, 1.0);
  EXPECT_EQ(c.model.omega_c, 20.0);
  EXPECT_EQ(c.g_grid->min, 1e-5);
  EXPECT_EQ(c.g_grid->max, 1e-3);
}

TEST(Presets, LiouvillianScanRange) {
  const auto c = preset("fig6");
  EXPECT_EQ(c.g_grid->min, 0.0);
  EXPECT_EQ(c.g_grid->max, 2.2);
  EXPECT_EQ(c.target, EPTarget::liouvillian);
}

TEST(Presets, UnknownNameListsValidNames) {
  try {
    preset("fig99");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    for (const auto& n : preset_names()) EXPECT_NE(what.find(n), std::string::npos) << n;
  }
}

TEST(Override, DottedKeys) {
  ExperimentConfig c = preset("fig4");
  c = apply_override(c, "model.g=0.3");
  c = apply_override(c, "spec.jump_policy=none");
  c = apply_override(c, "g_grid.n_points=11");
  EXPECT_EQ(c.model.g, 0.3);
  EXPECT_EQ(c.spec.jump_policy, JumpPolicy::none);
  EXPECT_EQ(c.g_grid->n_points, 11u);
  c = apply_override(c, "output_path=/tmp/some where");
  EXPECT_EQ(c.output_path, "/tmp/some where");
  EXPECT_THROW(apply_override(c, "model.g"), ConfigError);
  EXPECT_THROW(apply_override(c, "model.nope=1"), ConfigError);
  EXPECT_THROW(apply_override(c, "model.g.x=1"), ConfigError);
}

TEST(FormatNumber, SeventeenSignificantDigits) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Run, TraceDecayCsvAndByteReproducibility) {
  const fs::path a = scratch("trace_a"), b = scratch("trace_b");
  const auto ra = run(parse_config(minimal(a)));
  run(parse_config(minimal(b)));
  ASSERT_EQ(ra.files.size(), 1u);
  EXPECT_EQ(first_line(a / "trace_decay.csv"), "t,approach,g,trace");
  EXPECT_EQ(slurp(a / "trace_decay.csv"), slurp(b / "trace_decay.csv"));
  // 21 times x 2 approaches x 2 couplings + header
  std::ifstream in(a / "trace_decay.csv");
  std::size_t lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  EXPECT_EQ(lines, 1u + 21u * 4u);
}

TEST(Run, MonteCarloRowsAreReproducible) {
  ExperimentConfig c = preset("fig3");
  c.time_grid = TimeGrid{0.5, 500};
  c.g_grid = SweepAxis{0.33, 0.33, 1};
  c.mc = McConfig{128, 11};
  c.output_path = scratch("mc_a").string();
  run(c);
  const std::string first = slurp(fs::path(c.output_path) / "compare.csv");
  c.output_path = scratch("mc_b").string();
  run(c);
  EXPECT_EQ(first, slurp(fs::path(c.output_path) / "compare.csv"));
  EXPECT_EQ(first.rfind("t,approach_pair,g,trace_distance\n", 0), 0u);
  EXPECT_NE(first.find("local:mc-lindblad"), std::string::npos);
}

TEST(Run, EpScanWritesReports) {
  ExperimentConfig c = preset("fig4");
  c.g_grid = SweepAxis{0.0, 0.3, 61};
  c.output_path = scratch("ep").string();
  const auto r = run(c);
  EXPECT_EQ(r.accepted_eps, 1u);
  const fs::path out(c.output_path);
  const std::string scan_header = first_line(out / "ep_scan.csv");
  EXPECT_EQ(scan_header.rfind("g,kappa_V,min_gap,min_nonorth,re_lambda_1,", 0), 0u);
  EXPECT_NE(scan_header.find("abs_lambda_4"), std::string::npos);
  std::ifstream eps(out / "eps.csv");
  std::string header, row;
  std::getline(eps, header);
  std::getline(eps, row);
  EXPECT_EQ(header.rfind("g_star,", 0), 0u);
  EXPECT_NEAR(std::stod(row.substr(0, row.find(','))), 0.12, 0.02);
}

TEST(Run, NonnormalityHeader) {
  ExperimentConfig c = preset("fig5");
  c.g_grid = SweepAxis{0.0, 1.0, 3};
  c.output_path = scratch("nn").string();
  run(c);
  EXPECT_EQ(first_line(fs::path(c.output_path) / "nonnormality.csv").rfind("g,approach,N_L,N_D,HD_contribution", 0), 0u);
}

#ifdef NHME_CLI_PATH
namespace {

int cli(const std::string& args) {
  const std::string cmd = std::string(NHME_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli");
  EXPECT_EQ(cli("presets"), 0);
  EXPECT_EQ(cli("presets fig99"), 2);
  EXPECT_EQ(cli("run --preset fig99"), 2);
  EXPECT_EQ(cli("run"), 2);
  EXPECT_EQ(cli("frobnicate"), 2);
  EXPECT_EQ(cli("run " + (dir / "missing.json").string()), 2);
  EXPECT_EQ(cli("run --preset fig4 --override g_grid.n_points=0"), 2);
  EXPECT_EQ(cli("run --preset fig4 --override g_grid.n_points=41 --override output_path=" + (dir / "ok").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "ok" / "eps.csv"));
  // Survival probability underflows: normalising the no-jump state is impossible.
  EXPECT_EQ(cli("run --preset fig2b --override model.alpha_c=2 --override model.alpha_h=2"
                " --override time_grid.t_max=1000 --override time_grid.n_steps=100 --override output_path=" +
                (dir / "underflow").string()),
            3);
}

TEST(Cli, PresetOutputIsAConfig) {
  const fs::path dir = scratch("cli_presets");
  const std::string cmd = std::string(NHME_CLI_PATH) + " presets fig2 > " + (dir / "fig2.json").string();
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_EQ(to_json(load_config(dir / "fig2.json")), to_json(preset("fig2")));
}
#endif
