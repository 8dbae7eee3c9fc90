#include "gedanken/export.hpp"

#include <cstdio>
#include <fstream>

#include "gedanken/strings.hpp"
#include "gedanken/version.hpp"
#include "json.hpp"

namespace gedanken {

using detail::cat;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string full(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

ordered_json envelope_json(const Envelope& e) {
  ordered_json j;
  if (e.kind == EnvelopeKind::Unit) {
    j["kind"] = "unit";
  } else {
    j["kind"] = "gaussian";
    j["center"] = e.center;
    j["width"] = e.width;
  }
  return j;
}

ordered_json parameters_json(const ResolvedConfig& config) {
  ordered_json p;
  if (config.scenario == Scenario::Doppler) {
    p["omega"] = config.doppler.omega_in;
    p["v"] = config.doppler.v;
    p["mass"] = config.doppler.mass;
    return p;
  }
  p["grid"] = {{"n_points", config.protocol.grid.n_points},
               {"length", config.protocol.grid.length}};
  ordered_json prep;
  prep["d"] = config.protocol.preparation.d;
  prep["sigma"] = config.protocol.preparation.sigma;
  prep["k0"] = config.protocol.preparation.k0;
  prep["envelope1"] = envelope_json(config.protocol.preparation.envelope1);
  prep["envelope2"] = envelope_json(config.protocol.preparation.envelope2);
  p["preparation"] = prep;
  if (config.scenario != Scenario::EprIdeal) {
    ordered_json ptr;
    ptr["axis"] = config.protocol.pointer.axis;
    ptr["basis"] = to_string(config.protocol.pointer.basis);
    ptr["value"] = config.protocol.pointer.value;
    ptr["smearing"] = config.protocol.pointer.smearing;
    p["pointer"] = ptr;
  }
  p["alice_basis"] = to_string(config.protocol.alice_basis);
  p["bob_basis"] = to_string(config.protocol.bob_basis);
  if (config.scenario == Scenario::Counterfactual) {
    switch (config.protocol.counterfactual_base) {
      case CounterfactualBase::EprIdeal: p["base_scenario"] = "epr_ideal"; break;
      case CounterfactualBase::BohrCorrected:
        p["base_scenario"] = "bohr_corrected";
        break;
      case CounterfactualBase::BohrFlawed:
        p["base_scenario"] = "bohr_flawed";
        break;
    }
  }
  return p;
}

}  // namespace

std::string density_csv(const Density& density) {
  if (density.axes.empty())
    throw ValidityError("cannot export a density with no axes");
  std::string out;
  out.reserve(density.values.size() * 32);
  out += "# axes=";
  for (int a = 0; a < density.n_axes(); ++a) {
    if (a) out += ',';
    out += density.axes[a];
    out += ':';
    out += to_string(density.reps[a]);
  }
  out += " cell=";
  out += full(density.cell);
  out += " n=";
  out += std::to_string(density.grid.n);
  out += '\n';
  for (int a = 0; a < density.n_axes(); ++a) {
    out += density.axes[a];
    out += ',';
  }
  out += "density\n";
  const int n = density.grid.n;
  const int n_ax = density.n_axes();
  std::vector<std::size_t> strides(n_ax);
  for (int a = 0; a < n_ax; ++a) strides[a] = ipow(n, n_ax - 1 - a);
  for (std::size_t idx = 0; idx < density.values.size(); ++idx) {
    for (int a = 0; a < n_ax; ++a) {
      const int i = static_cast<int>(idx / strides[a]) % n;
      out += full(density.grid.values(density.reps[a])[i]);
      out += ',';
    }
    out += full(density.values[idx]);
    out += '\n';
  }
  return out;
}

void export_density(const Density& density,
                    const std::filesystem::path& path) {
  const std::string body = density_csv(density);
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error(cat("cannot write '", path.string(), "'"));
  out << body;
  if (!out)
    throw std::runtime_error(cat("write failed for '", path.string(), "'"));
}

std::string counterfactual_csv(const std::vector<CounterfactualRow>& rows) {
  std::string out =
      "basis,alice_outcome,predicted_bob,conditional_mass,element_of_reality\n";
  for (const CounterfactualRow& r : rows) {
    out += to_string(r.basis);
    out += ',';
    out += full(r.alice_outcome);
    out += ',';
    out += full(r.predicted_bob);
    out += ',';
    out += full(r.conditional_mass);
    out += ',';
    out += r.element_of_reality ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string render_report_json(const ResolvedConfig& config,
                               const ProtocolReport& report) {
  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["scenario"] = to_string(config.scenario);
  j["parameters"] = parameters_json(config);
  j["postselection_probability"] = report.postselection_probability;
  if (report.disturbance) j["disturbance"] = *report.disturbance;
  ordered_json correlations = ordered_json::object();
  for (const NamedCorrelation& c : report.correlations) {
    correlations[c.name] = {{"ridge_slope", c.report.ridge_slope},
                            {"ridge_offset", c.report.ridge_offset},
                            {"pearson", c.report.pearson},
                            {"flatness_tv", c.report.flatness_tv}};
  }
  j["correlations"] = correlations;
  ordered_json densities = ordered_json::object();
  for (const NamedDensity& d : report.densities) {
    ordered_json meta;
    meta["file"] = d.name + ".csv";
    meta["axes"] = d.density.axes;
    std::vector<std::string> reps;
    for (Rep r : d.density.reps) reps.push_back(to_string(r));
    meta["reps"] = reps;
    meta["cell"] = d.density.cell;
    meta["sum"] = density_sum(d.density);
    densities[d.name] = meta;
  }
  j["densities"] = densities;
  if (!report.counterfactual.empty()) {
    ordered_json rows = ordered_json::array();
    for (const CounterfactualRow& r : report.counterfactual) {
      rows.push_back({{"basis", to_string(r.basis)},
                      {"alice_outcome", r.alice_outcome},
                      {"predicted_bob", r.predicted_bob},
                      {"conditional_mass", r.conditional_mass},
                      {"element_of_reality", r.element_of_reality}});
    }
    j["counterfactual"] = rows;
  }
  j["notes"] = report.notes;
  return j.dump(2) + "\n";
}

std::string render_doppler_report_json(const ResolvedConfig& config,
                                       const CollisionResult& result) {
  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["scenario"] = to_string(config.scenario);
  j["parameters"] = parameters_json(config);
  j["collision"] = {{"omega_out", result.omega_out},
                    {"v_out", result.v_out},
                    {"shift_exact", result.shift_exact},
                    {"shift_expansion", result.shift_expansion},
                    {"shift_doppler", result.shift_doppler}};
  const double v_inferred = infer_velocity(config.doppler.omega_in,
                                           result.omega_out,
                                           config.doppler.mass);
  j["readout"] = {
      {"velocity", v_inferred},
      {"momentum", config.doppler.mass * v_inferred},
      {"momentum_true", config.doppler.mass * config.doppler.v}};
  j["notes"] = config.notes;
  return j.dump(2) + "\n";
}

std::string render_manifest_json(const RunManifest& manifest) {
  ordered_json j;
  j["tool"] = manifest.tool;
  j["version"] = manifest.version;
  j["scenario"] = manifest.scenario;
  j["artifacts"] = manifest.artifacts;
  j["notes"] = manifest.notes;
  return j.dump(2) + "\n";
}

}  // namespace gedanken
