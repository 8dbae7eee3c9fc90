#pragma once

#include <filesystem>

#include "gedanken/config.hpp"
#include "gedanken/export.hpp"

namespace gedanken {

// Executes the configured scenario and writes its artifacts (density CSVs,
// report.json, manifest.json) into out_dir.  Bytes are deterministic for a
// fixed configuration and tool version.
RunManifest run_scenario(const ResolvedConfig& config,
                         const std::filesystem::path& out_dir);

}  // namespace gedanken
