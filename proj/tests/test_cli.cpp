#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "gedanken/config.hpp"
#include "gedanken/export.hpp"
#include "gedanken/run.hpp"

using namespace gedanken;
namespace fs = std::filesystem;

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_command(const std::string& cmd) {
  CommandResult result;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 256> buf{};
  while (fgets(buf.data(), buf.size(), pipe) != nullptr)
    result.output += buf.data();
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> sorted_files(const fs::path& dir) {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir))
    names.push_back(entry.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

const char* kScenarios[] = {"epr_ideal",   "bohr_corrected", "bohr_flawed",
                            "disturbance", "counterfactual", "doppler"};

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "gedanken_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("minimal config document resolves to the documented defaults") {
  const ResolvedConfig cfg =
      resolve_config_text(R"({"scenario": "epr_ideal"})");
  CHECK(cfg.scenario == Scenario::EprIdeal);
  CHECK(cfg.protocol.grid.n_points == 128);
  CHECK(cfg.protocol.grid.length == 20.0);
  CHECK(cfg.protocol.preparation.d == 3.0);
  CHECK(cfg.protocol.preparation.sigma == 0.15);
  CHECK(cfg.protocol.preparation.k0 == 0.0);
  CHECK(cfg.protocol.preparation.envelope1.kind == EnvelopeKind::Unit);
  CHECK(cfg.notes.empty());
}

TEST_CASE("disturbance defaults to finite transverse profiles") {
  const ResolvedConfig cfg =
      resolve_config_text(R"({"scenario": "disturbance"})");
  CHECK(cfg.protocol.preparation.envelope1.kind == EnvelopeKind::Gaussian);
  CHECK(cfg.protocol.preparation.envelope2.kind == EnvelopeKind::Gaussian);
  CHECK(cfg.protocol.preparation.envelope2.center == -3.0);
  CHECK(cfg.protocol.preparation.envelope1.width == 1.5);
}

TEST_CASE("ridge-wrapping separations are rejected at parse time") {
  CHECK_THROWS_AS(resolve_config_text(
                      R"({"scenario": "epr_ideal",
                          "preparation": {"d": 15.0}})"),
                  ConfigError);
}

TEST_CASE("off-lattice momenta snap with a recorded distance") {
  const ResolvedConfig cfg = resolve_config_text(
      R"({"scenario": "bohr_corrected", "preparation": {"k0": 0.3}})");
  const double dk = 2.0 * kPi / 20.0;
  CHECK(cfg.protocol.preparation.k0 == doctest::Approx(dk).epsilon(1e-12));
  REQUIRE(!cfg.notes.empty());
  CHECK(cfg.notes.front().find("snapped") != std::string::npos);
}

TEST_CASE("malformed documents fail with diagnostics") {
  CHECK_THROWS_AS(resolve_config_text("{nope"), ConfigError);
  CHECK_THROWS_AS(resolve_config_text(R"({"scenario": "epr_ideal",
                                          "grid": {"n_points": 4}})"),
                  ConfigError);
  CHECK_THROWS_AS(resolve_config_text(R"({"scenario": "epr_ideal",
                                          "typo_field": 1})"),
                  ConfigError);
  CHECK_THROWS_AS(resolve_config_text(R"({"scenario": "epr_ideal",
                                          "outputs": ["no_such_density"]})"),
                  ConfigError);
  CHECK_THROWS_AS(resolve_config_text(R"({"scenario": "bohr_flawed",
                                          "pointer": {"basis": "momentum"}})"),
                  ConfigError);
  CHECK_THROWS_AS(resolve_config_text("{}"), ConfigError);
  CHECK_THROWS_AS(
      resolve_config_text(R"({"scenario": "doppler"})", Scenario::EprIdeal),
      ConfigError);
}

TEST_CASE("density CSV export: shape, round trip and rejection") {
  const ResolvedConfig cfg =
      resolve_config_text(R"({"scenario": "epr_ideal"})");
  const ProtocolReport rep = run_epr_ideal(cfg.protocol);
  const Density& pos = rep.density("position_joint");
  const std::string csv = density_csv(pos);

  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line.find("# axes=particle1:position,particle2:position") == 0);
  CHECK(line.find("cell=") != std::string::npos);
  std::getline(lines, line);
  CHECK(line == "particle1,particle2,density");
  std::size_t rows = 0;
  double sum = 0.0;
  while (std::getline(lines, line)) {
    ++rows;
    const std::size_t comma = line.rfind(',');
    // strtod, not stod: ridge tails are subnormal and stod throws on them
    sum += std::strtod(line.c_str() + comma + 1, nullptr);
  }
  CHECK(rows == 128u * 128u);
  CHECK(sum * pos.cell == doctest::Approx(1.0).epsilon(1e-9));

  Density empty;
  CHECK_THROWS_AS(density_csv(empty), ValidityError);
}

TEST_CASE("cli runs every scenario twice with byte-identical artifacts") {
  const fs::path dir = work_dir();
  const std::string binary = GEDANKEN_BIN;
  const std::string config = std::string(GEDANKEN_CONFIG_DIR) + "/default.json";
  for (const char* scenario : kScenarios) {
    const fs::path out_a = dir / (std::string(scenario) + "_a");
    const fs::path out_b = dir / (std::string(scenario) + "_b");
    for (const fs::path& out : {out_a, out_b}) {
      const CommandResult r = run_command(binary + " " + scenario +
                                          " --config " + config + " --out " +
                                          out.string());
      REQUIRE_MESSAGE(r.exit_code == 0, r.output);
    }
    const std::vector<std::string> names = sorted_files(out_a);
    CHECK(names == sorted_files(out_b));
    CHECK(!names.empty());
    for (const std::string& name : names) {
      const std::string context = std::string(scenario) + "/" + name;
      CHECK_MESSAGE(slurp(out_a / name) == slurp(out_b / name), context);
      CHECK(fs::file_size(out_a / name) > 0);
    }
  }
}

TEST_CASE("cli outputs match the golden tree") {
  const fs::path dir = work_dir() / "golden_check";
  const fs::path golden_root = GEDANKEN_GOLDEN_DIR;
  const std::string binary = GEDANKEN_BIN;
  const std::string config = std::string(GEDANKEN_CONFIG_DIR) + "/default.json";
  REQUIRE_MESSAGE(fs::exists(golden_root),
                  "golden directory missing; regenerate with "
                  "tools/regen_golden.sh");
  for (const char* scenario : kScenarios) {
    const fs::path golden_dir = golden_root / scenario;
    const fs::path out = dir / scenario;
    const CommandResult r = run_command(binary + " " + scenario +
                                        " --config " + config + " --out " +
                                        out.string());
    REQUIRE_MESSAGE(r.exit_code == 0, r.output);
    const std::string missing = std::string("no golden outputs for ") + scenario;
    REQUIRE_MESSAGE(fs::exists(golden_dir), missing);
    const std::vector<std::string> names = sorted_files(golden_dir);
    CHECK(names == sorted_files(out));
    for (const std::string& name : names) {
      const std::string context =
          std::string(scenario) + "/" + name + " differs from the golden copy";
      CHECK_MESSAGE(slurp(golden_dir / name) == slurp(out / name), context);
    }
  }
}

TEST_CASE("cli maps error classes to exit codes") {
  const fs::path dir = work_dir() / "errors";
  fs::create_directories(dir);
  const std::string binary = GEDANKEN_BIN;

  // config error: ridge wrap
  const fs::path bad_cfg = dir / "bad.json";
  std::ofstream(bad_cfg) << R"({"scenario": "epr_ideal",
                               "preparation": {"d": 15.0}})";
  CommandResult r = run_command(binary + " epr_ideal --config " +
                                bad_cfg.string() + " --out " +
                                (dir / "out1").string());
  CHECK(r.exit_code == 2);
  CHECK(fs::exists(dir / "out1" / "error.json"));

  // numerical-validity error reaches exit code 3
  r = run_command(binary + " doppler --v 0.5 --out " + (dir / "out2").string());
  CHECK(r.exit_code == 3);
  CHECK(fs::exists(dir / "out2" / "error.json"));

  // unknown scenario is a config error
  r = run_command(binary + " warp_drive --out " + (dir / "out3").string());
  CHECK(r.exit_code == 2);

  // missing required argument
  r = run_command(binary);
  CHECK(r.exit_code == 2);
}

TEST_CASE("library-level runs are reproducible through the filesystem") {
  const fs::path dir = work_dir() / "lib_run";
  const ResolvedConfig cfg = default_config(Scenario::Doppler);
  const RunManifest manifest = run_scenario(cfg, dir);
  CHECK(manifest.scenario == "doppler");
  for (const std::string& artifact : manifest.artifacts) {
    CHECK(fs::exists(dir / artifact));
    CHECK(fs::file_size(dir / artifact) > 0);
  }
}

TEST_CASE("the outputs filter restricts which densities are exported") {
  const fs::path dir = work_dir() / "filtered";
  ResolvedConfig cfg = resolve_config_text(
      R"({"scenario": "epr_ideal", "grid": {"n_points": 64},
          "preparation": {"sigma": 0.2},
          "outputs": ["position_joint"]})");
  const RunManifest manifest = run_scenario(cfg, dir);
  CHECK(fs::exists(dir / "position_joint.csv"));
  CHECK(!fs::exists(dir / "momentum_joint.csv"));
  CHECK(!fs::exists(dir / "mixed_joint.csv"));
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "manifest.json"));
  // the report itself still carries every computed correlation
  const std::string report = slurp(dir / "report.json");
  CHECK(report.find("momentum_joint") != std::string::npos);
  CHECK(manifest.artifacts.size() == 3);
}

TEST_CASE("counterfactual base selection parses and validates") {
  const ResolvedConfig cfg = resolve_config_text(
      R"({"scenario": "counterfactual", "base_scenario": "bohr_flawed",
          "grid": {"n_points": 64}, "preparation": {"sigma": 0.2}})");
  CHECK(cfg.protocol.counterfactual_base == CounterfactualBase::BohrFlawed);
  CHECK_THROWS_AS(resolve_config_text(
                      R"({"scenario": "counterfactual",
                          "base_scenario": "warp_drive"})"),
                  ConfigError);
}
