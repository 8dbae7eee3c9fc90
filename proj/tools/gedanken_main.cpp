#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gedanken/run.hpp"
#include "gedanken/strings.hpp"
#include "gedanken/version.hpp"
#include "json.hpp"

namespace {

enum class LogLevel { Quiet, Info, Debug };

LogLevel log_level() {
  const char* env = std::getenv("GEDANKEN_LOG");
  if (!env) return LogLevel::Info;
  const std::string v = env;
  if (v == "quiet") return LogLevel::Quiet;
  if (v == "debug") return LogLevel::Debug;
  return LogLevel::Info;
}

void write_error_record(const std::filesystem::path& out_dir,
                        const std::string& type, const std::string& message,
                        const std::string& scenario) {
  nlohmann::ordered_json j;
  j["tool"] = gedanken::kToolName;
  j["version"] = gedanken::kToolVersion;
  if (!scenario.empty()) j["scenario"] = scenario;
  j["error"] = {{"type", type}, {"message", message}};
  std::cerr << j.dump() << "\n";
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) return;
  std::ofstream out(out_dir / "error.json", std::ios::binary);
  if (out) out << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gedanken;

  CLI::App app{"Two-particle correlation and moving-diaphragm postselection "
               "simulator"};
  std::string scenario_arg;
  std::string config_path;
  std::string out_dir = "out";
  app.add_option("scenario", scenario_arg,
                 "epr_ideal | bohr_corrected | bohr_flawed | disturbance | "
                 "counterfactual | doppler")
      ->required();
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "output directory (default: out)");
  std::optional<double> omega_flag, v_flag, mass_flag;
  app.add_option("--omega", omega_flag, "doppler: incident photon frequency");
  app.add_option("--v", v_flag, "doppler: target velocity");
  app.add_option("--mass", mass_flag, "doppler: target mass");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForVersion& e) {
    std::cout << kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  }

  std::string scenario_name;
  try {
    const Scenario scenario = scenario_from_string(scenario_arg);
    scenario_name = to_string(scenario);
    ResolvedConfig config = config_path.empty()
                                ? default_config(scenario)
                                : parse_config(config_path, scenario);
    if (omega_flag) config.doppler.omega_in = *omega_flag;
    if (v_flag) config.doppler.v = *v_flag;
    if (mass_flag) config.doppler.mass = *mass_flag;

    const auto start = std::chrono::steady_clock::now();
    const RunManifest manifest = run_scenario(config, out_dir);
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);

    if (log_level() != LogLevel::Quiet)
      std::cout << scenario_name << ": wrote " << manifest.artifacts.size()
                << " artifacts to " << out_dir << "\n";
    if (log_level() == LogLevel::Debug)
      std::cerr << "completed in " << elapsed.count() << " ms\n";
    return 0;
  } catch (const ConfigError& e) {
    write_error_record(out_dir, "config", e.what(), scenario_name);
    return 2;
  } catch (const ValidityError& e) {
    write_error_record(out_dir, "validity", e.what(), scenario_name);
    return 3;
  } catch (const std::exception& e) {
    write_error_record(out_dir, "internal", e.what(), scenario_name);
    return 1;
  }
}
