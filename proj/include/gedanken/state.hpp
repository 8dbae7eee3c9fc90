#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gedanken/grid.hpp"

namespace gedanken {

enum class EnvelopeKind { Unit, Gaussian };

// Transverse profile of an incident particle.  Unit is the idealized flat
// profile (windowed to the grid); Gaussian has |phi|^2 std = width.
struct Envelope {
  EnvelopeKind kind = EnvelopeKind::Unit;
  double center = 0.0;
  double width = 0.0;

  double amplitude(double x) const;
};

struct PreparationParams {
  double d = 3.0;      // slit separation
  double sigma = 0.15; // delta regularization width
  double k0 = 0.0;     // initial diaphragm momentum (snapped to the lattice)
  Envelope envelope1;
  Envelope envelope2;
};

// Dense complex amplitude tensor over one grid axis per subsystem.  Row-major,
// axis order = label order.  Normalized in the mixed cell measure (dx per
// position axis, dk per momentum axis).
struct StateTensor {
  Grid1D grid;
  std::vector<std::string> labels;
  std::vector<Rep> reps;
  std::vector<Complex> amps;

  int n_axes() const { return static_cast<int>(labels.size()); }
  int axis_index(std::string_view label) const;  // throws on unknown label
  double cell_measure() const;
};

double norm_squared(const StateTensor& state);
StateTensor normalized(const StateTensor& state);  // throws on zero norm

// Two-particle pair with amplitude concentrated on x1 = x2 + d and uniform
// center-of-mass weight around the periodic grid.  The ridge kernel is the
// center-of-mass average of two width-sigma slit kernels (amplitude
// exp(-u^2/8 sigma^2)), which is exactly what surviving the diaphragm
// momentum postselection of build_bohr_state produces.  Envelopes are not
// used here.  Axes: particle1, particle2 (both position).
StateTensor build_epr_state(const Grid1D& grid, const PreparationParams& p);

// Three-body state: two particles pinned to the slits of a movable
// diaphragm at coordinate a, with slit kernels delta_sigma(x1-a) and
// delta_sigma(x2+d-a), transverse envelopes, and diaphragm phase e^{i K0 a}.
// Axes: particle1, particle2, diaphragm (all position).
StateTensor build_bohr_state(const Grid1D& grid, const PreparationParams& p);

// Applies the unitary 1-D transform along the named axis only.
StateTensor transform_axis(const StateTensor& state, std::string_view axis,
                           Rep target);

// First or second moment of the axis marginal in the requested observable
// basis (the axis is transformed first if needed).  moment is 1 or 2.
double expectation(const StateTensor& state, std::string_view axis,
                   Rep observable, int moment);

struct PairMoments {
  double mean = 0.0;
  double variance = 0.0;
};

// Moments of the wrapped relative coordinate x_a - x_b (folded into
// [-L/2, L/2)): the lattice realization of the observable x^_a - x^_b on the
// periodic grid.  Both axes are read in the position basis.
PairMoments difference_moments(const StateTensor& state, std::string_view axis_a,
                               std::string_view axis_b);

// Moments of the wrapped total momentum k_a + k_b, both axes in the momentum
// basis.
PairMoments sum_moments(const StateTensor& state, std::string_view axis_a,
                        std::string_view axis_b);

// Reorders axes to the given label permutation.
StateTensor permute_axes(const StateTensor& state,
                         const std::vector<std::string>& new_order);

// Edge amplitude of an envelope relative to its peak (wrap diagnostics).
double envelope_edge_ratio(const Envelope& envelope, const Grid1D& grid);

}  // namespace gedanken
