#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gedanken/doppler.hpp"
#include "gedanken/protocols.hpp"

namespace gedanken {

enum class Scenario {
  EprIdeal,
  BohrCorrected,
  BohrFlawed,
  Disturbance,
  Counterfactual,
  Doppler,
};

std::string to_string(Scenario scenario);
Scenario scenario_from_string(const std::string& s);

// Fully validated run description: every default filled, every off-lattice
// value snapped (with a note), every invariant checked up front.
struct ResolvedConfig {
  Scenario scenario = Scenario::EprIdeal;
  ProtocolConfig protocol;
  CollisionInput doppler{1.0, 1e-3, 1e9};
  std::vector<std::string> outputs;  // density filter; empty = everything
  std::vector<std::string> notes;
};

ResolvedConfig default_config(Scenario scenario);

// Parses the JSON document at `path`.  A scenario given on the command line
// must agree with a scenario named in the file.
ResolvedConfig parse_config(const std::filesystem::path& path,
                            std::optional<Scenario> cli_scenario = {});

// Same resolution from an in-memory document (used by tests).
ResolvedConfig resolve_config_text(const std::string& text,
                                   std::optional<Scenario> cli_scenario = {});

}  // namespace gedanken
