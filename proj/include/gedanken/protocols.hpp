#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gedanken/measurement.hpp"

namespace gedanken {

struct GridSpec {
  int n_points = 128;
  double length = 20.0;
};

enum class CounterfactualBase { EprIdeal, BohrCorrected, BohrFlawed };

struct ProtocolConfig {
  GridSpec grid;
  PreparationParams preparation;
  PointerSpec pointer;  // diaphragm outcome for the 3-body runs
  Rep alice_basis = Rep::Position;
  Rep bob_basis = Rep::Momentum;
  CounterfactualBase counterfactual_base = CounterfactualBase::EprIdeal;
};

struct CounterfactualRow {
  Rep basis = Rep::Position;
  double alice_outcome = 0.0;
  double predicted_bob = 0.0;
  double conditional_mass = 0.0;
  bool element_of_reality = false;  // mass >= 0.9 at the regularized level
};

struct NamedDensity {
  std::string name;
  Density density;
};

struct NamedCorrelation {
  std::string name;
  CorrelationReport report;
};

struct ProtocolReport {
  std::vector<NamedDensity> densities;
  std::vector<NamedCorrelation> correlations;
  double postselection_probability = 1.0;
  std::optional<double> disturbance;
  std::vector<CounterfactualRow> counterfactual;
  std::vector<std::string> notes;

  const Density& density(std::string_view name) const;
  const CorrelationReport& correlation(std::string_view name) const;
};

// Two-particle pair, no diaphragm: joint densities in both bases, ridge
// fits, and conditional slices for sampled outcomes of particle 1.
ProtocolReport run_epr_ideal(const ProtocolConfig& config);

// Three-body preparation, sharp (or smeared) postselection on the diaphragm
// momentum, then the independent particle measurements.  Requires a
// momentum-basis pointer.
ProtocolReport run_bohr_corrected(const ProtocolConfig& config);

// Same preparation postselected on the diaphragm position instead; pins the
// particle positions and erases the momentum correlation.  Requires a
// position-basis pointer.
ProtocolReport run_bohr_flawed(const ProtocolConfig& config);

// Runs both postselections on one preparation and reports the total
// variation between particle 2's momentum marginals.
ProtocolReport run_disturbance_comparison(const ProtocolConfig& config);

// Conditional-mass table: for sampled outcomes of particle 1 in each basis,
// the probability that particle 2 lands within the prediction band.
ProtocolReport run_counterfactual_table(const ProtocolConfig& config);

}  // namespace gedanken
