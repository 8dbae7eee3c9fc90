#include "gedanken/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "gedanken/strings.hpp"

namespace gedanken {

using detail::cat;

namespace {

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

Grid1D grid_from(const GridSpec& spec) {
  return make_grid(spec.n_points, spec.length);
}

void note_envelopes(const PreparationParams& p, const Grid1D& grid,
                    ProtocolReport& report) {
  const Envelope* envs[] = {&p.envelope1, &p.envelope2};
  for (int i = 0; i < 2; ++i) {
    if (envs[i]->kind == EnvelopeKind::Unit) continue;
    const double ratio = envelope_edge_ratio(*envs[i], grid);
    if (ratio > 1e-6)
      report.notes.push_back(cat("envelope", i + 1,
                                 " does not decay at the grid edge (relative "
                                 "amplitude ",
                                 num(ratio), "): wrapped"));
  }
}

// 5 evenly spaced lattice indices spanning the central 50% of the support.
std::vector<int> sampled_indices(const Density& marginal1) {
  const int n = marginal1.grid.n;
  const double peak =
      *std::max_element(marginal1.values.begin(), marginal1.values.end());
  int lo = 0, hi = n - 1;
  while (lo < n && marginal1.values[lo] <= 1e-12 * peak) ++lo;
  while (hi > 0 && marginal1.values[hi] <= 1e-12 * peak) --hi;
  const int quarter_lo = lo + (hi - lo) / 4;
  const int quarter_hi = hi - (hi - lo) / 4;
  std::vector<int> idx(5);
  for (int t = 0; t < 5; ++t)
    idx[t] = quarter_lo +
             static_cast<int>(std::lround(t * (quarter_hi - quarter_lo) / 4.0));
  return idx;
}

void add_joint(const StateTensor& pair, const std::string& name, Rep r1,
               Rep r2, ProtocolReport& report) {
  Density d = joint_density(pair, {r1, r2});
  report.correlations.push_back({name, ridge_fit(d)});
  report.densities.push_back({name, std::move(d)});
}

// Joint densities in both bases plus the mixed one, their ridge fits, and
// conditional slices over particle 2 for sampled particle-1 outcomes.
void add_pair_analysis(const StateTensor& pair, ProtocolReport& report) {
  add_joint(pair, "position_joint", Rep::Position, Rep::Position, report);
  add_joint(pair, "momentum_joint", Rep::Momentum, Rep::Momentum, report);
  add_joint(pair, "mixed_joint", Rep::Position, Rep::Momentum, report);

  const struct {
    const char* tag;
    const char* joint;
    Rep rep;
  } bases[] = {{"position", "position_joint", Rep::Position},
               {"momentum", "momentum_joint", Rep::Momentum}};
  for (const auto& b : bases) {
    // copy: the conditional push_backs below may relocate the density store
    const Density joint = report.density(b.joint);
    const Density m1 = marginal(joint, {"particle1"});
    const std::vector<int> samples = sampled_indices(m1);
    for (int t = 0; t < 5; ++t) {
      const double outcome = joint.grid.values(b.rep)[samples[t]];
      Density cond = conditional(joint, "particle1", outcome);
      report.notes.push_back(cat("conditional_", b.tag, "_", t,
                                 ": particle1 ", b.tag, " = ", num(outcome)));
      report.densities.push_back(
          {cat("conditional_", b.tag, "_", t), std::move(cond)});
    }
  }
}

void note_postselection(const PostselectionResult& ps, const PointerSpec& spec,
                        ProtocolReport& report) {
  if (ps.snap_distance != 0.0)
    report.notes.push_back(cat("pointer value snapped from ", num(spec.value),
                               " to ", num(ps.snapped_value), " (distance ",
                               num(ps.snap_distance), ")"));
  report.notes.push_back(
      cat("postselection probability ", num(ps.probability)));
}

}  // namespace

const Density& ProtocolReport::density(std::string_view name) const {
  for (const NamedDensity& d : densities)
    if (d.name == name) return d.density;
  throw ValidityError(cat("report has no density named '", std::string(name),
                          "'"));
}

const CorrelationReport& ProtocolReport::correlation(
    std::string_view name) const {
  for (const NamedCorrelation& c : correlations)
    if (c.name == name) return c.report;
  throw ValidityError(cat("report has no correlation named '",
                          std::string(name), "'"));
}

ProtocolReport run_epr_ideal(const ProtocolConfig& config) {
  const Grid1D grid = grid_from(config.grid);
  const StateTensor pair = build_epr_state(grid, config.preparation);
  ProtocolReport report;
  add_pair_analysis(pair, report);
  return report;
}

ProtocolReport run_bohr_corrected(const ProtocolConfig& config) {
  if (config.pointer.basis != Rep::Momentum)
    throw ValidityError(
        "the corrected protocol postselects the diaphragm momentum "
        "(pointer basis must be momentum)");
  const Grid1D grid = grid_from(config.grid);
  const StateTensor whole = build_bohr_state(grid, config.preparation);
  ProtocolReport report;
  note_envelopes(config.preparation, grid, report);
  report.densities.push_back(
      {"pointer_spectrum",
       pointer_spectrum(whole, config.pointer.axis, Rep::Momentum)});
  const PostselectionResult ps = postselect(whole, config.pointer);
  note_postselection(ps, config.pointer, report);
  const double k0s =
      grid.momenta[grid.nearest_index(Rep::Momentum, config.preparation.k0)];
  report.notes.push_back(
      cat("momentum transferred to the pair: ", num(k0s - ps.snapped_value)));
  report.postselection_probability = ps.probability;
  add_pair_analysis(ps.state, report);
  return report;
}

ProtocolReport run_bohr_flawed(const ProtocolConfig& config) {
  if (config.pointer.basis != Rep::Position)
    throw ValidityError(
        "the flawed protocol postselects the diaphragm position "
        "(pointer basis must be position)");
  const Grid1D grid = grid_from(config.grid);
  const StateTensor whole = build_bohr_state(grid, config.preparation);
  ProtocolReport report;
  note_envelopes(config.preparation, grid, report);
  report.densities.push_back(
      {"pointer_spectrum",
       pointer_spectrum(whole, config.pointer.axis, Rep::Position)});
  const PostselectionResult ps = postselect(whole, config.pointer);
  note_postselection(ps, config.pointer, report);
  report.postselection_probability = ps.probability;
  add_pair_analysis(ps.state, report);
  // Document the pinned positions alongside the flat momentum joint.
  const Density px1 =
      marginal(report.density("position_joint"), {"particle1"});
  const Density px2 =
      marginal(report.density("position_joint"), {"particle2"});
  const auto peak_of = [](const Density& d) {
    const auto it = std::max_element(d.values.begin(), d.values.end());
    return d.grid.values(d.reps[0])[it - d.values.begin()];
  };
  report.notes.push_back(cat("particle1 position pinned at ", num(peak_of(px1))));
  report.notes.push_back(cat("particle2 position pinned at ", num(peak_of(px2))));
  return report;
}

ProtocolReport run_disturbance_comparison(const ProtocolConfig& config) {
  if (config.pointer.basis != Rep::Momentum)
    throw ValidityError(
        "the disturbance comparison needs a momentum pointer for its "
        "first leg");
  const Grid1D grid = grid_from(config.grid);
  const StateTensor whole = build_bohr_state(grid, config.preparation);
  ProtocolReport report;
  note_envelopes(config.preparation, grid, report);
  const bool unit_profiles =
      config.preparation.envelope1.kind == EnvelopeKind::Unit &&
      config.preparation.envelope2.kind == EnvelopeKind::Unit;
  report.notes.push_back(
      unit_profiles
          ? "transverse profiles: unit (idealized); the comparison regime "
            "of record uses finite gaussian profiles"
          : cat("transverse profiles: gaussian, widths ",
                num(config.preparation.envelope1.width), " and ",
                num(config.preparation.envelope2.width)));

  const PostselectionResult k_leg = postselect(whole, config.pointer);
  PointerSpec x_spec;
  x_spec.axis = config.pointer.axis;
  x_spec.basis = Rep::Position;
  x_spec.value = 0.0;
  x_spec.smearing = 0.0;
  const PostselectionResult x_leg = postselect(whole, x_spec);
  report.notes.push_back(cat("momentum-leg probability ", num(k_leg.probability),
                             ", position-leg probability ",
                             num(x_leg.probability)));
  report.postselection_probability = k_leg.probability;

  Density mk = pointer_spectrum(k_leg.state, "particle2", Rep::Momentum);
  Density mx = pointer_spectrum(x_leg.state, "particle2", Rep::Momentum);
  report.disturbance = total_variation(mk, mx);
  report.notes.push_back(
      cat("disturbance (total variation between particle2 momentum "
          "marginals) = ",
          num(*report.disturbance)));
  report.densities.push_back({"k2_marginal_k_run", std::move(mk)});
  report.densities.push_back({"k2_marginal_x_run", std::move(mx)});
  return report;
}

ProtocolReport run_counterfactual_table(const ProtocolConfig& config) {
  const Grid1D grid = grid_from(config.grid);
  ProtocolReport report;
  StateTensor pair;
  double sum_target = 0.0;  // expected k1 + k2
  switch (config.counterfactual_base) {
    case CounterfactualBase::EprIdeal:
      pair = build_epr_state(grid, config.preparation);
      report.notes.push_back("counterfactual base: epr_ideal");
      break;
    case CounterfactualBase::BohrCorrected: {
      PointerSpec spec = config.pointer;
      if (spec.basis != Rep::Momentum) {
        spec.basis = Rep::Momentum;
        spec.value = config.preparation.k0;
        spec.smearing = 0.0;
      }
      const StateTensor whole = build_bohr_state(grid, config.preparation);
      const PostselectionResult ps = postselect(whole, spec);
      report.postselection_probability = ps.probability;
      const double k0s = grid.momenta[grid.nearest_index(
          Rep::Momentum, config.preparation.k0)];
      sum_target = k0s - ps.snapped_value;
      pair = ps.state;
      report.notes.push_back("counterfactual base: bohr_corrected");
      break;
    }
    case CounterfactualBase::BohrFlawed: {
      PointerSpec spec = config.pointer;
      if (spec.basis != Rep::Position) {
        spec.basis = Rep::Position;
        spec.value = 0.0;
        spec.smearing = 0.0;
      }
      const StateTensor whole = build_bohr_state(grid, config.preparation);
      const PostselectionResult ps = postselect(whole, spec);
      report.postselection_probability = ps.probability;
      pair = ps.state;
      report.notes.push_back("counterfactual base: bohr_flawed");
      break;
    }
  }

  // Prediction bands: twice the regularized predictor's std.  The position
  // ridge carries the center-of-mass averaged kernel (std sqrt(2) sigma);
  // the momentum rule is sharp to one lattice cell.
  const double band_position = 2.0 * std::sqrt(2.0) * config.preparation.sigma;
  const double band_momentum = 2.0 * grid.dk;
  const struct {
    Rep rep;
    double band;
  } bases[] = {{Rep::Position, band_position}, {Rep::Momentum, band_momentum}};

  for (const auto& b : bases) {
    const Density joint = joint_density(pair, {b.rep, b.rep});
    const Density m1 = marginal(joint, {"particle1"});
    const std::vector<int> samples = sampled_indices(m1);
    for (int t = 0; t < 5; ++t) {
      const double outcome = grid.values(b.rep)[samples[t]];
      const Density cond = conditional(joint, "particle1", outcome);
      double predicted = 0.0;
      if (b.rep == Rep::Position)
        predicted = grid.wrap_position(outcome - config.preparation.d);
      else
        predicted = grid.wrap_momentum(sum_target - outcome);
      // band integral with fractional edge cells (plain cell counting
      // undershoots the continuum band mass at this sampling rate)
      double mass = 0.0;
      for (int i = 0; i < grid.n; ++i) {
        const double value = grid.values(b.rep)[i];
        const double dist = b.rep == Rep::Position
                                ? grid.wrap_position(value - predicted)
                                : grid.wrap_momentum(value - predicted);
        const double overlap = std::clamp(
            (b.band + 0.5 * cond.cell - std::abs(dist)) / cond.cell, 0.0,
            1.0);
        mass += overlap * cond.values[i] * cond.cell;
      }
      CounterfactualRow row;
      row.basis = b.rep;
      row.alice_outcome = outcome;
      row.predicted_bob = predicted;
      row.conditional_mass = mass;
      row.element_of_reality = mass >= 0.9;
      report.counterfactual.push_back(row);
    }
  }
  return report;
}

}  // namespace gedanken
