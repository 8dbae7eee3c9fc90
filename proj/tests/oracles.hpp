// Independent reference computations used to pin expected values: direct
// Fourier sums in the continuum convention, moment extraction from sampled
// densities, and a bisection solver for the photon-mirror conservation pair.
// Nothing here touches the production transform or solver paths.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "gedanken/grid.hpp"

namespace oracle {

using gedanken::Complex;
using gedanken::Grid1D;
using gedanken::kPi;

// psi~(k_t) = (dx / sqrt(2 pi)) * sum_j psi(x_j) e^{-i k_t x_j}, evaluated
// term by term with std::polar.
inline std::vector<Complex> forward_quadrature(
    const Grid1D& grid, const std::vector<Complex>& values) {
  std::vector<Complex> out(grid.n);
  const double scale = grid.spacing / std::sqrt(2.0 * kPi);
  for (int t = 0; t < grid.n; ++t) {
    Complex acc{0.0, 0.0};
    for (int j = 0; j < grid.n; ++j)
      acc += values[j] *
             std::polar(1.0, -grid.momenta[t] * grid.positions[j]);
    out[t] = scale * acc;
  }
  return out;
}

inline std::vector<Complex> inverse_quadrature(
    const Grid1D& grid, const std::vector<Complex>& values) {
  std::vector<Complex> out(grid.n);
  const double scale = grid.dk / std::sqrt(2.0 * kPi);
  for (int j = 0; j < grid.n; ++j) {
    Complex acc{0.0, 0.0};
    for (int t = 0; t < grid.n; ++t)
      acc += values[t] *
             std::polar(1.0, grid.momenta[t] * grid.positions[j]);
    out[j] = scale * acc;
  }
  return out;
}

struct SampleMoments {
  double mean = 0.0;
  double std = 0.0;
};

// Mean/std of a probability vector over the given coordinates.
inline SampleMoments density_moments(const std::vector<double>& coords,
                                     const std::vector<double>& mass) {
  double total = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    total += mass[i];
    mean += mass[i] * coords[i];
  }
  mean /= total;
  double var = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i)
    var += mass[i] * (coords[i] - mean) * (coords[i] - mean);
  return {mean, std::sqrt(var / total)};
}

// Solves the conservation pair for the outgoing frequency by bisection on
//   E(w') = (omega + m v^2 / 2) - (w' + m v'(w')^2 / 2),
//   v'(w') = v - (omega + w') / m,
// which is strictly decreasing in w' for |v'| < 1.
inline double bisect_omega_out(double omega, double v, double m) {
  auto residual = [&](double w_out) {
    const double v_out = v - (omega + w_out) / m;
    return (omega + 0.5 * m * v * v) - (w_out + 0.5 * m * v_out * v_out);
  };
  double lo = 0.0;
  double hi = 4.0 * omega + 8.0 * omega * std::abs(v) + 8.0 * omega * omega / m;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
