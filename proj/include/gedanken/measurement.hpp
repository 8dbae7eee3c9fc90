#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gedanken/state.hpp"

namespace gedanken {

// Pointer outcome for an axis contraction.  value snaps to the nearest
// lattice point in the chosen basis; smearing 0 is a sharp slice, otherwise
// a normalized Gaussian pointer of that std (must be >= one lattice cell).
struct PointerSpec {
  std::string axis = "diaphragm";
  Rep basis = Rep::Momentum;
  double value = 0.0;
  double smearing = 0.0;
};

struct PostselectionResult {
  StateTensor state;   // one fewer axis, normalized
  double probability = 0.0;
  double snapped_value = 0.0;
  double snap_distance = 0.0;
};

// Real nonnegative probability array over a subset of axes; sums to 1 in the
// cell measure (product of dx/dk over axes).
struct Density {
  Grid1D grid;
  std::vector<std::string> axes;
  std::vector<Rep> reps;
  std::vector<double> values;
  double cell = 0.0;

  int n_axes() const { return static_cast<int>(axes.size()); }
  int axis_index(std::string_view label) const;
};

struct CorrelationReport {
  double ridge_slope = 0.0;
  double ridge_offset = 0.0;
  double pearson = 0.0;
  // Total variation between the joint and the product of its marginals:
  // 0 when nothing links the axes ("broad and homogeneous"), ~1 for a
  // sharp ridge.
  double flatness_tv = 0.0;
};

// Contracts the named axis against the pointer and renormalizes.  Surviving
// axes keep their representations.  Throws when the outcome carries less
// than 1e-14 probability.
PostselectionResult postselect(const StateTensor& state,
                               const PointerSpec& pointer);

// |amplitudes|^2 with each axis brought to the requested representation.
Density joint_density(const StateTensor& state,
                      const std::vector<Rep>& target_reps);

// Sums out every axis not in keep (cell measure included), renormalizes.
// Kept axes stay in the density's own order regardless of the keep order.
Density marginal(const Density& density, const std::vector<std::string>& keep);

// Normalized slice of the density at the lattice value nearest to
// given_value.  Throws when the slice carries less than 1e-14 mass.
Density conditional(const Density& density, std::string_view given_axis,
                    double given_value);

// Weighted least-squares line through the per-column conditional means of a
// 2-axis density (axis 0 as a function of axis 1), plus the weighted Pearson
// coefficient and the flatness measure.  Both axes live on circles, so the
// fit detects the winding (slope sign) by phase coherence of the circular
// conditional means and unwraps onto the dominant branch before the least
// squares; with no coherent wrapped line it falls back to the plain fit.
CorrelationReport ridge_fit(const Density& density);

// 1/2 sum |d1 - d2| * cell, in [0, 1].  Densities must share axes, reps and
// grid.
double total_variation(const Density& d1, const Density& d2);

// Marginal distribution of one axis in the requested basis.
Density pointer_spectrum(const StateTensor& state, std::string_view axis,
                         Rep basis);

double density_sum(const Density& density);  // should be 1 within 1e-10

}  // namespace gedanken
