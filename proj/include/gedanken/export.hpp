#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gedanken/config.hpp"
#include "gedanken/measurement.hpp"
#include "gedanken/protocols.hpp"

namespace gedanken {

struct RunManifest {
  std::string tool;
  std::string version;
  std::string scenario;
  std::vector<std::string> artifacts;  // file names relative to the out dir
  std::vector<std::string> notes;
};

// One row per cell (axis coordinates then the density value), lexicographic
// in the axis indices, full decimal precision.  The leading comment line
// names axes, representations and the cell measure.
void export_density(const Density& density, const std::filesystem::path& path);
std::string density_csv(const Density& density);

std::string render_report_json(const ResolvedConfig& config,
                               const ProtocolReport& report);
std::string render_doppler_report_json(const ResolvedConfig& config,
                                       const CollisionResult& result);
std::string render_manifest_json(const RunManifest& manifest);
std::string counterfactual_csv(const std::vector<CounterfactualRow>& rows);

}  // namespace gedanken
