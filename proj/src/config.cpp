#include "gedanken/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "gedanken/strings.hpp"
#include "json.hpp"

namespace gedanken {

using detail::cat;
using nlohmann::json;

namespace {

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

void reject_unknown_keys(const json& node, const std::string& where,
                         const std::set<std::string>& allowed) {
  for (const auto& item : node.items())
    if (!allowed.contains(item.key()))
      throw ConfigError(cat(where, ": unknown field '", item.key(), "'"));
}

double require_number(const json& node, const std::string& where) {
  if (!node.is_number())
    throw ConfigError(cat(where, ": expected a number"));
  return node.get<double>();
}

int require_integer(const json& node, const std::string& where) {
  if (!node.is_number_integer())
    throw ConfigError(cat(where, ": expected an integer"));
  return node.get<int>();
}

std::string require_string(const json& node, const std::string& where) {
  if (!node.is_string())
    throw ConfigError(cat(where, ": expected a string"));
  return node.get<std::string>();
}

Envelope parse_envelope(const json& node, const std::string& where) {
  reject_unknown_keys(node, where, {"kind", "center", "width"});
  Envelope e;
  const std::string kind = require_string(node.at("kind"), where + ".kind");
  if (kind == "unit") {
    if (node.contains("center") || node.contains("width"))
      throw ConfigError(cat(where, ": unit envelopes take no center/width"));
    e.kind = EnvelopeKind::Unit;
    return e;
  }
  if (kind != "gaussian")
    throw ConfigError(cat(where, ".kind: expected 'unit' or 'gaussian', got '",
                          kind, "'"));
  e.kind = EnvelopeKind::Gaussian;
  if (!node.contains("center") || !node.contains("width"))
    throw ConfigError(cat(where, ": gaussian envelopes need center and width"));
  e.center = require_number(node.at("center"), where + ".center");
  e.width = require_number(node.at("width"), where + ".width");
  return e;
}

bool needs_three_axes(Scenario s) {
  switch (s) {
    case Scenario::BohrCorrected:
    case Scenario::BohrFlawed:
    case Scenario::Disturbance:
      return true;
    case Scenario::Counterfactual:
    case Scenario::EprIdeal:
    case Scenario::Doppler:
      return false;
  }
  return false;
}

std::set<std::string> known_outputs(Scenario s) {
  std::set<std::string> pair = {"position_joint", "momentum_joint",
                                "mixed_joint"};
  for (int t = 0; t < 5; ++t) {
    pair.insert(cat("conditional_position_", t));
    pair.insert(cat("conditional_momentum_", t));
  }
  switch (s) {
    case Scenario::EprIdeal:
      return pair;
    case Scenario::BohrCorrected:
    case Scenario::BohrFlawed:
      pair.insert("pointer_spectrum");
      return pair;
    case Scenario::Disturbance:
      return {"k2_marginal_k_run", "k2_marginal_x_run"};
    case Scenario::Counterfactual:
    case Scenario::Doppler:
      return {};
  }
  return {};
}

// Mirrors the builders' numeric validity rules so that configuration
// problems surface as ConfigError with the offending field named.
void validate_protocol(const ResolvedConfig& cfg) {
  const GridSpec& g = cfg.protocol.grid;
  if (g.n_points < 8)
    throw ConfigError(cat("grid.n_points: need at least 8, got ", g.n_points));
  if (!(g.length > 0.0))
    throw ConfigError(cat("grid.length: must be positive, got ", g.length));
  if (needs_three_axes(cfg.scenario) ||
      (cfg.scenario == Scenario::Counterfactual &&
       cfg.protocol.counterfactual_base != CounterfactualBase::EprIdeal)) {
    if (g.n_points > 128)
      throw ConfigError(cat("grid.n_points: 3-axis scenarios are limited to "
                            "128 points, got ",
                            g.n_points));
  }
  const double spacing = g.length / g.n_points;
  const PreparationParams& p = cfg.protocol.preparation;
  if (p.sigma < 0.5 * spacing)
    throw ConfigError(cat("preparation.sigma: ", num(p.sigma),
                          " is below the resolvable limit ",
                          num(0.5 * spacing), " (aliased delta)"));
  const double radius = p.sigma * std::sqrt(8.0 * std::log(1e6));
  if (std::abs(p.d) + radius > 0.5 * g.length)
    throw ConfigError(cat("preparation.d: ", num(p.d),
                          " leaves no room for the correlation ridge to decay "
                          "on length ",
                          num(g.length), " (ridge wraps)"));
  const double k_limit = kPi * g.n_points / g.length;
  if (std::abs(p.k0) > k_limit)
    throw ConfigError(cat("preparation.k0: ", num(p.k0),
                          " exceeds the lattice limit ", num(k_limit)));
  const Envelope* envs[] = {&p.envelope1, &p.envelope2};
  for (int i = 0; i < 2; ++i) {
    if (envs[i]->kind != EnvelopeKind::Gaussian) continue;
    const std::string where = cat("preparation.envelope", i + 1);
    if (envs[i]->width < 2.0 * spacing)
      throw ConfigError(cat(where, ".width: ", num(envs[i]->width),
                            " is below the resolvable limit ",
                            num(2.0 * spacing)));
    if (envs[i]->center < -0.5 * g.length ||
        envs[i]->center >= 0.5 * g.length)
      throw ConfigError(cat(where, ".center: ", num(envs[i]->center),
                            " lies outside the grid"));
  }
  const PointerSpec& ptr = cfg.protocol.pointer;
  if (needs_three_axes(cfg.scenario)) {
    if (ptr.axis != "diaphragm")
      throw ConfigError(cat("pointer.axis: expected 'diaphragm', got '",
                            ptr.axis, "'"));
    const double limit =
        ptr.basis == Rep::Position ? 0.5 * g.length : k_limit;
    if (std::abs(ptr.value) > limit)
      throw ConfigError(cat("pointer.value: ", num(ptr.value),
                            " lies outside the ", to_string(ptr.basis),
                            " lattice range"));
    const double cell = ptr.basis == Rep::Position ? spacing : 2.0 * kPi / g.length;
    if (ptr.smearing != 0.0 && ptr.smearing < cell)
      throw ConfigError(cat("pointer.smearing: ", num(ptr.smearing),
                            " is below one lattice cell (", num(cell),
                            "); use 0 for a sharp slice"));
    if (cfg.scenario == Scenario::BohrCorrected &&
        ptr.basis != Rep::Momentum)
      throw ConfigError(
          "pointer.basis: bohr_corrected postselects the diaphragm momentum");
    if (cfg.scenario == Scenario::BohrFlawed && ptr.basis != Rep::Position)
      throw ConfigError(
          "pointer.basis: bohr_flawed postselects the diaphragm position");
    if (cfg.scenario == Scenario::Disturbance && ptr.basis != Rep::Momentum)
      throw ConfigError(
          "pointer.basis: the disturbance comparison takes the momentum-leg "
          "pointer");
  }
  if (cfg.scenario == Scenario::Doppler) {
    if (!(cfg.doppler.omega_in > 0.0))
      throw ConfigError(cat("doppler.omega: must be positive, got ",
                            num(cfg.doppler.omega_in)));
    if (!(cfg.doppler.mass > 0.0))
      throw ConfigError(cat("doppler.mass: must be positive, got ",
                            num(cfg.doppler.mass)));
    if (!(std::abs(cfg.doppler.v) < 0.1))
      throw ConfigError(cat("doppler.v: ", num(cfg.doppler.v),
                            " is outside the nonrelativistic window |v| < 0.1"));
  }
  const std::set<std::string> known = known_outputs(cfg.scenario);
  for (const std::string& name : cfg.outputs)
    if (!known.contains(name))
      throw ConfigError(cat("outputs: '", name, "' is not produced by the ",
                            to_string(cfg.scenario), " scenario"));
}

// Snap momenta/positions to the lattice, recording the distance.
void apply_snapping(ResolvedConfig& cfg) {
  const GridSpec& g = cfg.protocol.grid;
  const double dk = 2.0 * kPi / g.length;
  const double spacing = g.length / g.n_points;
  auto snap = [&](double value, double cell, double first) {
    const double idx = std::round((value - first) / cell);
    return first + idx * cell;
  };
  PreparationParams& p = cfg.protocol.preparation;
  const double k0_first = (-g.n_points / 2) * dk;
  const double k_period = g.n_points * dk;
  const double k0_folded =
      p.k0 - k_period * std::floor(p.k0 / k_period + 0.5);
  const double k0s = snap(k0_folded, dk, k0_first);
  if (k0s != p.k0) {
    cfg.notes.push_back(cat("preparation.k0 snapped from ", num(p.k0), " to ",
                            num(k0s), " (distance ", num(k0s - p.k0), ")"));
    p.k0 = k0s;
  }
  if (needs_three_axes(cfg.scenario) ||
      cfg.scenario == Scenario::Counterfactual) {
    PointerSpec& ptr = cfg.protocol.pointer;
    const double cell = ptr.basis == Rep::Position ? spacing : dk;
    const double first = ptr.basis == Rep::Position
                             ? -0.5 * g.length
                             : k0_first;
    // fold the periodic coordinate into its principal range, then snap
    const double period = g.n_points * cell;
    const double folded =
        ptr.value - period * std::floor(ptr.value / period + 0.5);
    const double snapped = snap(folded, cell, first);
    if (snapped != ptr.value) {
      cfg.notes.push_back(cat("pointer.value snapped from ", num(ptr.value),
                              " to ", num(snapped), " (distance ",
                              num(snapped - ptr.value), ")"));
      ptr.value = snapped;
    }
  }
}

ResolvedConfig resolve(const json& doc, std::optional<Scenario> cli_scenario) {
  if (!doc.is_object())
    throw ConfigError("configuration document must be a JSON object");
  reject_unknown_keys(doc, "top level",
                      {"scenario", "grid", "preparation", "pointer",
                       "alice_basis", "bob_basis", "base_scenario", "outputs",
                       "doppler"});

  std::optional<Scenario> file_scenario;
  if (doc.contains("scenario"))
    file_scenario =
        scenario_from_string(require_string(doc.at("scenario"), "scenario"));
  if (!cli_scenario && !file_scenario)
    throw ConfigError("no scenario given (name one in the file or on the "
                      "command line)");
  if (cli_scenario && file_scenario && *cli_scenario != *file_scenario)
    throw ConfigError(cat("scenario mismatch: command line says '",
                          to_string(*cli_scenario), "', file says '",
                          to_string(*file_scenario), "'"));

  ResolvedConfig cfg = default_config(cli_scenario ? *cli_scenario
                                                   : *file_scenario);

  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    reject_unknown_keys(g, "grid", {"n_points", "length"});
    if (g.contains("n_points"))
      cfg.protocol.grid.n_points =
          require_integer(g.at("n_points"), "grid.n_points");
    if (g.contains("length"))
      cfg.protocol.grid.length = require_number(g.at("length"), "grid.length");
  }
  if (doc.contains("preparation")) {
    const json& p = doc.at("preparation");
    reject_unknown_keys(p, "preparation",
                        {"d", "sigma", "k0", "envelope1", "envelope2"});
    PreparationParams& prep = cfg.protocol.preparation;
    if (p.contains("d")) prep.d = require_number(p.at("d"), "preparation.d");
    if (p.contains("sigma"))
      prep.sigma = require_number(p.at("sigma"), "preparation.sigma");
    if (p.contains("k0"))
      prep.k0 = require_number(p.at("k0"), "preparation.k0");
    if (p.contains("envelope1"))
      prep.envelope1 =
          parse_envelope(p.at("envelope1"), "preparation.envelope1");
    if (p.contains("envelope2"))
      prep.envelope2 =
          parse_envelope(p.at("envelope2"), "preparation.envelope2");
    // The disturbance regime of record keeps finite profiles unless the
    // document overrides them; recenter the default second profile on the
    // second slit when d changed.
    if (cfg.scenario == Scenario::Disturbance && !p.contains("envelope2") &&
        cfg.protocol.preparation.envelope2.kind == EnvelopeKind::Gaussian)
      cfg.protocol.preparation.envelope2.center = -prep.d;
  }
  if (doc.contains("pointer")) {
    const json& q = doc.at("pointer");
    reject_unknown_keys(q, "pointer", {"axis", "basis", "value", "smearing"});
    PointerSpec& ptr = cfg.protocol.pointer;
    if (q.contains("axis"))
      ptr.axis = require_string(q.at("axis"), "pointer.axis");
    if (q.contains("basis"))
      ptr.basis = rep_from_string(require_string(q.at("basis"), "pointer.basis"));
    if (q.contains("value"))
      ptr.value = require_number(q.at("value"), "pointer.value");
    else if (ptr.basis == Rep::Momentum)
      ptr.value = cfg.protocol.preparation.k0;
    if (q.contains("smearing"))
      ptr.smearing = require_number(q.at("smearing"), "pointer.smearing");
  } else if (cfg.protocol.pointer.basis == Rep::Momentum) {
    cfg.protocol.pointer.value = cfg.protocol.preparation.k0;
  }
  if (doc.contains("alice_basis"))
    cfg.protocol.alice_basis =
        rep_from_string(require_string(doc.at("alice_basis"), "alice_basis"));
  if (doc.contains("bob_basis"))
    cfg.protocol.bob_basis =
        rep_from_string(require_string(doc.at("bob_basis"), "bob_basis"));
  if (doc.contains("base_scenario")) {
    const std::string base =
        require_string(doc.at("base_scenario"), "base_scenario");
    if (base == "epr_ideal")
      cfg.protocol.counterfactual_base = CounterfactualBase::EprIdeal;
    else if (base == "bohr_corrected")
      cfg.protocol.counterfactual_base = CounterfactualBase::BohrCorrected;
    else if (base == "bohr_flawed")
      cfg.protocol.counterfactual_base = CounterfactualBase::BohrFlawed;
    else
      throw ConfigError(cat("base_scenario: expected epr_ideal, "
                            "bohr_corrected or bohr_flawed, got '",
                            base, "'"));
  }
  if (doc.contains("outputs")) {
    const json& outs = doc.at("outputs");
    if (!outs.is_array())
      throw ConfigError("outputs: expected an array of density names");
    for (const json& o : outs)
      cfg.outputs.push_back(require_string(o, "outputs[]"));
  }
  if (doc.contains("doppler")) {
    const json& dp = doc.at("doppler");
    reject_unknown_keys(dp, "doppler", {"omega", "v", "mass"});
    if (dp.contains("omega"))
      cfg.doppler.omega_in = require_number(dp.at("omega"), "doppler.omega");
    if (dp.contains("v")) cfg.doppler.v = require_number(dp.at("v"), "doppler.v");
    if (dp.contains("mass"))
      cfg.doppler.mass = require_number(dp.at("mass"), "doppler.mass");
  }

  apply_snapping(cfg);
  validate_protocol(cfg);
  return cfg;
}

}  // namespace

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::EprIdeal: return "epr_ideal";
    case Scenario::BohrCorrected: return "bohr_corrected";
    case Scenario::BohrFlawed: return "bohr_flawed";
    case Scenario::Disturbance: return "disturbance";
    case Scenario::Counterfactual: return "counterfactual";
    case Scenario::Doppler: return "doppler";
  }
  return "unknown";
}

Scenario scenario_from_string(const std::string& s) {
  if (s == "epr_ideal") return Scenario::EprIdeal;
  if (s == "bohr_corrected") return Scenario::BohrCorrected;
  if (s == "bohr_flawed") return Scenario::BohrFlawed;
  if (s == "disturbance") return Scenario::Disturbance;
  if (s == "counterfactual") return Scenario::Counterfactual;
  if (s == "doppler") return Scenario::Doppler;
  throw ConfigError(cat("unknown scenario '", s,
                        "' (expected epr_ideal, bohr_corrected, bohr_flawed, "
                        "disturbance, counterfactual or doppler)"));
}

ResolvedConfig default_config(Scenario scenario) {
  ResolvedConfig cfg;
  cfg.scenario = scenario;
  cfg.protocol.pointer.axis = "diaphragm";
  cfg.protocol.pointer.smearing = 0.0;
  switch (scenario) {
    case Scenario::BohrFlawed:
      cfg.protocol.pointer.basis = Rep::Position;
      cfg.protocol.pointer.value = 0.0;
      break;
    case Scenario::Disturbance:
      cfg.protocol.pointer.basis = Rep::Momentum;
      cfg.protocol.pointer.value = cfg.protocol.preparation.k0;
      cfg.protocol.preparation.envelope1 =
          Envelope{EnvelopeKind::Gaussian, 0.0, 1.5};
      cfg.protocol.preparation.envelope2 =
          Envelope{EnvelopeKind::Gaussian, -cfg.protocol.preparation.d, 1.5};
      break;
    default:
      cfg.protocol.pointer.basis = Rep::Momentum;
      cfg.protocol.pointer.value = cfg.protocol.preparation.k0;
      break;
  }
  return cfg;
}

ResolvedConfig parse_config(const std::filesystem::path& path,
                            std::optional<Scenario> cli_scenario) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError(cat("cannot read configuration file '", path.string(),
                          "'"));
  std::stringstream buf;
  buf << in.rdbuf();
  return resolve_config_text(buf.str(), cli_scenario);
}

ResolvedConfig resolve_config_text(const std::string& text,
                                   std::optional<Scenario> cli_scenario) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(cat("configuration parse error: ", e.what()));
  }
  return resolve(doc, cli_scenario);
}

}  // namespace gedanken
