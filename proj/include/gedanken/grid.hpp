#pragma once

#include <complex>
#include <string>
#include <vector>

#include "gedanken/error.hpp"

namespace gedanken {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

enum class Rep { Position, Momentum };

std::string to_string(Rep rep);
Rep rep_from_string(const std::string& s);

// Uniform periodic 1-D lattice with matched sample sets in both
// representations:
//
//   x_j = -L/2 + j*dx,        j = 0..N-1,  dx = L/N
//   k_m = 2*pi*m/L,           m = -N/2 .. N/2-1  (dk = 2*pi/L)
//
// so that dx*dk*N = 2*pi, the condition under which the discrete transform
// in transform_1d is unitary in the cell measure.  Units are dimensionless
// with hbar = 1.
struct Grid1D {
  int n = 0;
  double length = 0.0;
  double spacing = 0.0;  // dx
  double dk = 0.0;       // 2*pi/L
  std::vector<double> positions;
  std::vector<double> momenta;

  double cell(Rep rep) const { return rep == Rep::Position ? spacing : dk; }
  const std::vector<double>& values(Rep rep) const {
    return rep == Rep::Position ? positions : momenta;
  }
  // Half-range of the momentum comb, pi*N/L.
  double momentum_limit() const { return kPi * n / length; }

  int nearest_index(Rep rep, double value) const;

  // Displacement folded into [-L/2, L/2).
  double wrap_position(double t) const;
  // Momentum displacement folded into [-pi*N/L, pi*N/L).
  double wrap_momentum(double t) const;
};

// Grids are interchangeable iff they share point count and extent.
bool operator==(const Grid1D& a, const Grid1D& b);
inline bool operator!=(const Grid1D& a, const Grid1D& b) { return !(a == b); }

// n_points >= 8, length > 0.
Grid1D make_grid(int n_points, double length);

struct ComplexVector {
  Grid1D grid;
  Rep rep = Rep::Position;
  std::vector<Complex> values;
};

// Regularized position delta: values ~ exp(-(x-center)^2/(4 width^2)),
// normalized so that |values|^2 is a probability density (std = width,
// sum |v|^2 dx = 1).  center must lie on the grid, width >= spacing/2
// (narrower kernels alias on the momentum comb).
ComplexVector gaussian_kernel(const Grid1D& grid, double center, double width);

// e^{ikx}/sqrt(L) with k snapped to the momentum lattice.
ComplexVector plane_wave(const Grid1D& grid, double k);

// Unitary representation change.  Convention (sampled symmetric continuum
// transform):
//
//   psi~(k) = (dx/sqrt(2 pi)) * sum_j psi(x_j) e^{-i k x_j}
//   psi(x)  = (dk/sqrt(2 pi)) * sum_m psi~(k_m) e^{+i k_m x}
//
// No-op when target equals the current representation.
ComplexVector transform_1d(const ComplexVector& vec, Rep target);

// sum |v|^2 * cell  (1 for normalized vectors).
double norm_squared(const ComplexVector& vec);

// Largest edge-cell amplitude relative to the peak amplitude; values above
// 1e-6 indicate the state does not decay inside the box ("wrapped").
double edge_amplitude_ratio(const ComplexVector& vec);

}  // namespace gedanken
