#include "gedanken/run.hpp"

#include <algorithm>
#include <fstream>

#include "gedanken/strings.hpp"
#include "gedanken/version.hpp"

namespace gedanken {

using detail::cat;

namespace {

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error(cat("cannot write '", path.string(), "'"));
  out << body;
  if (!out)
    throw std::runtime_error(cat("write failed for '", path.string(), "'"));
}

bool wants(const ResolvedConfig& config, const std::string& name) {
  if (config.outputs.empty()) return true;
  return std::find(config.outputs.begin(), config.outputs.end(), name) !=
         config.outputs.end();
}

}  // namespace

RunManifest run_scenario(const ResolvedConfig& config,
                         const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  RunManifest manifest;
  manifest.tool = kToolName;
  manifest.version = kToolVersion;
  manifest.scenario = to_string(config.scenario);
  manifest.notes = config.notes;

  if (config.scenario == Scenario::Doppler) {
    const CollisionResult result = collide_exact(config.doppler);
    write_text(out_dir / "report.json",
               render_doppler_report_json(config, result));
    manifest.artifacts.push_back("report.json");
    write_text(out_dir / "manifest.json", render_manifest_json(manifest));
    manifest.artifacts.push_back("manifest.json");
    return manifest;
  }

  ProtocolReport report;
  switch (config.scenario) {
    case Scenario::EprIdeal:
      report = run_epr_ideal(config.protocol);
      break;
    case Scenario::BohrCorrected:
      report = run_bohr_corrected(config.protocol);
      break;
    case Scenario::BohrFlawed:
      report = run_bohr_flawed(config.protocol);
      break;
    case Scenario::Disturbance:
      report = run_disturbance_comparison(config.protocol);
      break;
    case Scenario::Counterfactual:
      report = run_counterfactual_table(config.protocol);
      break;
    case Scenario::Doppler:
      break;  // handled above
  }
  // Configuration-resolution notes lead, protocol notes follow.
  std::vector<std::string> notes = config.notes;
  notes.insert(notes.end(), report.notes.begin(), report.notes.end());
  report.notes = notes;
  manifest.notes = report.notes;

  for (const NamedDensity& d : report.densities) {
    if (!wants(config, d.name)) continue;
    const std::string file = d.name + ".csv";
    export_density(d.density, out_dir / file);
    manifest.artifacts.push_back(file);
  }
  if (!report.counterfactual.empty()) {
    write_text(out_dir / "counterfactual_table.csv",
               counterfactual_csv(report.counterfactual));
    manifest.artifacts.push_back("counterfactual_table.csv");
  }
  write_text(out_dir / "report.json", render_report_json(config, report));
  manifest.artifacts.push_back("report.json");
  write_text(out_dir / "manifest.json", render_manifest_json(manifest));
  manifest.artifacts.push_back("manifest.json");
  return manifest;
}

}  // namespace gedanken
