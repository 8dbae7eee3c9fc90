#include "gedanken/grid.hpp"

#include <algorithm>
#include <cmath>

#include "gedanken/fourier.hpp"
#include "gedanken/strings.hpp"

namespace gedanken {

using detail::cat;

std::string to_string(Rep rep) {
  return rep == Rep::Position ? "position" : "momentum";
}

Rep rep_from_string(const std::string& s) {
  if (s == "position") return Rep::Position;
  if (s == "momentum") return Rep::Momentum;
  throw ConfigError("unknown representation '" + s +
                    "' (expected 'position' or 'momentum')");
}

int Grid1D::nearest_index(Rep rep, double value) const {
  const double cell_size = cell(rep);
  const double first = values(rep).front();
  const long idx = std::lround((value - first) / cell_size);
  return static_cast<int>(std::clamp(idx, 0L, static_cast<long>(n - 1)));
}

double Grid1D::wrap_position(double t) const {
  return t - length * std::floor(t / length + 0.5);
}

double Grid1D::wrap_momentum(double t) const {
  const double period = n * dk;
  return t - period * std::floor(t / period + 0.5);
}

bool operator==(const Grid1D& a, const Grid1D& b) {
  return a.n == b.n && a.length == b.length;
}

Grid1D make_grid(int n_points, double length) {
  if (n_points < 8)
    throw ValidityError(cat("grid needs at least 8 points, got ", n_points,
                            " (degenerate lattice)"));
  if (!(length > 0.0))
    throw ValidityError(cat("grid length must be positive, got ", length));
  Grid1D g;
  g.n = n_points;
  g.length = length;
  g.spacing = length / n_points;
  g.dk = 2.0 * kPi / length;
  g.positions.resize(n_points);
  g.momenta.resize(n_points);
  for (int j = 0; j < n_points; ++j)
    g.positions[j] = -0.5 * length + j * g.spacing;
  for (int t = 0; t < n_points; ++t) g.momenta[t] = (t - n_points / 2) * g.dk;
  return g;
}

ComplexVector gaussian_kernel(const Grid1D& grid, double center, double width) {
  if (width < 0.5 * grid.spacing)
    throw ValidityError(cat("kernel width ", width,
                            " is below the resolvable limit ",
                            0.5 * grid.spacing, " (aliased delta)"));
  if (center < -0.5 * grid.length || center >= 0.5 * grid.length)
    throw ValidityError(cat("kernel center ", center,
                            " lies outside the grid [", -0.5 * grid.length,
                            ", ", 0.5 * grid.length, ")"));
  ComplexVector v{grid, Rep::Position, std::vector<Complex>(grid.n)};
  const double denom = 4.0 * width * width;
  for (int j = 0; j < grid.n; ++j) {
    const double u = grid.positions[j] - center;
    v.values[j] = std::exp(-u * u / denom);
  }
  double nrm = 0.0;
  for (const Complex& c : v.values) nrm += std::norm(c);
  nrm *= grid.spacing;
  const double inv = 1.0 / std::sqrt(nrm);
  for (Complex& c : v.values) c *= inv;
  return v;
}

ComplexVector plane_wave(const Grid1D& grid, double k) {
  const int t = grid.nearest_index(Rep::Momentum, k);
  const double ks = grid.momenta[t];
  ComplexVector v{grid, Rep::Position, std::vector<Complex>(grid.n)};
  const double amp = 1.0 / std::sqrt(grid.length);
  for (int j = 0; j < grid.n; ++j)
    v.values[j] = std::polar(amp, ks * grid.positions[j]);
  return v;
}

ComplexVector transform_1d(const ComplexVector& vec, Rep target) {
  if (vec.rep == target) return vec;
  ComplexVector out{vec.grid, target, std::vector<Complex>(vec.values.size())};
  if (target == Rep::Momentum)
    detail::position_to_momentum(vec.grid.spacing, vec.values, out.values);
  else
    detail::momentum_to_position(vec.grid.dk, vec.values, out.values);
  return out;
}

double norm_squared(const ComplexVector& vec) {
  double acc = 0.0;
  for (const Complex& c : vec.values) acc += std::norm(c);
  return acc * vec.grid.cell(vec.rep);
}

double edge_amplitude_ratio(const ComplexVector& vec) {
  double peak = 0.0;
  for (const Complex& c : vec.values) peak = std::max(peak, std::abs(c));
  if (peak == 0.0) return 0.0;
  const double edge =
      std::max(std::abs(vec.values.front()), std::abs(vec.values.back()));
  return edge / peak;
}

}  // namespace gedanken
