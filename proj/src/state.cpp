#include "gedanken/state.hpp"

#include <algorithm>
#include <cmath>

#include "gedanken/fourier.hpp"
#include "gedanken/strings.hpp"

namespace gedanken {

using detail::cat;

namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Amplitude radius beyond which exp(-t^2 / denom) drops under 1e-6.
double decay_radius(double denom) { return std::sqrt(denom * std::log(1e6)); }

void validate_preparation(const Grid1D& grid, const PreparationParams& p,
                          bool needs_envelopes) {
  if (p.sigma < 0.5 * grid.spacing)
    throw ValidityError(cat("delta width ", p.sigma,
                            " is below the resolvable limit ",
                            0.5 * grid.spacing, " (aliased delta)"));
  // The correlation ridge must decay before the antipode of the difference
  // circle, otherwise the offset d aliases with d -+ L.
  const double radius = decay_radius(8.0 * p.sigma * p.sigma);
  if (std::abs(p.d) + radius > 0.5 * grid.length)
    throw ValidityError(cat("slit separation d=", p.d,
                            " leaves no room for the correlation ridge to "
                            "decay on a grid of length ",
                            grid.length, " (ridge wraps)"));
  if (std::abs(p.k0) > grid.momentum_limit())
    throw ValidityError(cat("initial diaphragm momentum ", p.k0,
                            " exceeds the lattice limit ",
                            grid.momentum_limit()));
  if (needs_envelopes) {
    for (const Envelope* e : {&p.envelope1, &p.envelope2}) {
      if (e->kind == EnvelopeKind::Gaussian) {
        if (e->width < 2.0 * grid.spacing)
          throw ValidityError(cat("envelope width ", e->width,
                                  " is below the resolvable limit ",
                                  2.0 * grid.spacing));
        if (e->center < -0.5 * grid.length || e->center >= 0.5 * grid.length)
          throw ValidityError(cat("envelope center ", e->center,
                                  " lies outside the grid"));
      }
    }
  }
}

}  // namespace

double Envelope::amplitude(double x) const {
  if (kind == EnvelopeKind::Unit) return 1.0;
  const double u = x - center;
  return std::exp(-u * u / (4.0 * width * width));
}

double envelope_edge_ratio(const Envelope& envelope, const Grid1D& grid) {
  if (envelope.kind == EnvelopeKind::Unit) return 0.0;
  double peak = 0.0;
  for (double x : grid.positions)
    peak = std::max(peak, envelope.amplitude(x));
  if (peak == 0.0) return 0.0;
  const double edge = std::max(envelope.amplitude(grid.positions.front()),
                               envelope.amplitude(grid.positions.back()));
  return edge / peak;
}

int StateTensor::axis_index(std::string_view label) const {
  for (int a = 0; a < n_axes(); ++a)
    if (labels[a] == label) return a;
  throw ValidityError(cat("unknown axis label '", std::string(label), "'"));
}

double StateTensor::cell_measure() const {
  double c = 1.0;
  for (Rep r : reps) c *= grid.cell(r);
  return c;
}

double norm_squared(const StateTensor& state) {
  double acc = 0.0;
  for (const Complex& c : state.amps) acc += std::norm(c);
  return acc * state.cell_measure();
}

StateTensor normalized(const StateTensor& state) {
  const double n2 = norm_squared(state);
  if (!(n2 > 1e-280))
    throw ValidityError("cannot normalize a zero-norm tensor");
  StateTensor out = state;
  const double inv = 1.0 / std::sqrt(n2);
  for (Complex& c : out.amps) c *= inv;
  return out;
}

StateTensor build_epr_state(const Grid1D& grid, const PreparationParams& p) {
  validate_preparation(grid, p, false);
  const int n = grid.n;
  // Ridge kernel over the wrapped difference u = x1 - x2: the center-of-mass
  // average of two width-sigma slit kernels, amplitude exp(-(u-d)^2/8 sigma^2).
  std::vector<double> ridge(n);
  const double denom = 8.0 * p.sigma * p.sigma;
  for (int r = 0; r < n; ++r) {
    const double u = grid.wrap_position(r * grid.spacing - p.d);
    ridge[r] = std::exp(-u * u / denom);
  }
  StateTensor s;
  s.grid = grid;
  s.labels = {"particle1", "particle2"};
  s.reps = {Rep::Position, Rep::Position};
  s.amps.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const std::size_t row = static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) s.amps[row + j] = ridge[(i - j + n) % n];
  }
  return normalized(s);
}

StateTensor build_bohr_state(const Grid1D& grid, const PreparationParams& p) {
  validate_preparation(grid, p, true);
  const int n = grid.n;
  if (n > 128)
    throw ValidityError(cat("3-axis states are limited to 128 points per "
                            "axis, got ",
                            n));
  const double denom = 4.0 * p.sigma * p.sigma;
  std::vector<double> slit1(n), slit2(n), env1(n), env2(n);
  for (int r = 0; r < n; ++r) {
    const double u1 = grid.wrap_position(r * grid.spacing);
    const double u2 = grid.wrap_position(r * grid.spacing + p.d);
    slit1[r] = std::exp(-u1 * u1 / denom);
    slit2[r] = std::exp(-u2 * u2 / denom);
  }
  for (int i = 0; i < n; ++i) {
    env1[i] = p.envelope1.amplitude(grid.positions[i]);
    env2[i] = p.envelope2.amplitude(grid.positions[i]);
  }
  const double k0s = grid.momenta[grid.nearest_index(Rep::Momentum, p.k0)];
  std::vector<Complex> phase(n);
  for (int k = 0; k < n; ++k)
    phase[k] = std::polar(1.0, k0s * grid.positions[k]);

  StateTensor s;
  s.grid = grid;
  s.labels = {"particle1", "particle2", "diaphragm"};
  s.reps = {Rep::Position, Rep::Position, Rep::Position};
  s.amps.resize(static_cast<std::size_t>(n) * n * n);
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k, ++idx) {
        const double amp = slit1[(i - k + n) % n] * slit2[(j - k + n) % n] *
                           env1[i] * env2[j];
        s.amps[idx] = amp * phase[k];
      }
    }
  }
  return normalized(s);
}

StateTensor transform_axis(const StateTensor& state, std::string_view axis,
                           Rep target) {
  const int ax = state.axis_index(axis);
  StateTensor out = state;
  if (out.reps[ax] == target) return out;
  const int n = state.grid.n;
  const std::size_t stride = ipow(n, state.n_axes() - 1 - ax);
  const std::size_t n_outer = ipow(n, ax);
  std::vector<Complex> fiber(n), result(n);
  for (std::size_t o = 0; o < n_outer; ++o) {
    const std::size_t block = o * stride * n;
    for (std::size_t i = 0; i < stride; ++i) {
      const std::size_t base = block + i;
      for (int t = 0; t < n; ++t) fiber[t] = out.amps[base + t * stride];
      if (target == Rep::Momentum)
        detail::position_to_momentum(state.grid.spacing, fiber, result);
      else
        detail::momentum_to_position(state.grid.dk, fiber, result);
      for (int t = 0; t < n; ++t) out.amps[base + t * stride] = result[t];
    }
  }
  out.reps[ax] = target;
  return out;
}

namespace {

// Probability mass per lattice index of one axis (sums to 1).
std::vector<double> axis_mass(const StateTensor& state, int ax) {
  const int n = state.grid.n;
  const std::size_t stride = ipow(n, state.n_axes() - 1 - ax);
  const std::size_t n_outer = ipow(n, ax);
  std::vector<double> mass(n, 0.0);
  for (std::size_t o = 0; o < n_outer; ++o) {
    const std::size_t block = o * stride * n;
    for (int t = 0; t < n; ++t) {
      const std::size_t base = block + t * stride;
      double acc = 0.0;
      for (std::size_t i = 0; i < stride; ++i)
        acc += std::norm(state.amps[base + i]);
      mass[t] += acc;
    }
  }
  const double cell = state.cell_measure();
  for (double& m : mass) m *= cell;
  return mass;
}

// Joint probability mass over two axes (n x n, sums to 1).
std::vector<double> pair_mass(const StateTensor& state, int ax_a, int ax_b) {
  const int n = state.grid.n;
  const int n_ax = state.n_axes();
  std::vector<std::size_t> strides(n_ax);
  for (int a = 0; a < n_ax; ++a) strides[a] = ipow(n, n_ax - 1 - a);
  std::vector<double> mass(static_cast<std::size_t>(n) * n, 0.0);
  const std::size_t total = state.amps.size();
  for (std::size_t idx = 0; idx < total; ++idx) {
    const int ia = static_cast<int>(idx / strides[ax_a]) % n;
    const int ib = static_cast<int>(idx / strides[ax_b]) % n;
    mass[static_cast<std::size_t>(ia) * n + ib] += std::norm(state.amps[idx]);
  }
  const double cell = state.cell_measure();
  for (double& m : mass) m *= cell;
  return mass;
}

PairMoments moments_from_values(const std::vector<double>& mass,
                                const std::vector<double>& value, int n) {
  double mean = 0.0;
  for (int ia = 0; ia < n; ++ia)
    for (int ib = 0; ib < n; ++ib)
      mean += mass[static_cast<std::size_t>(ia) * n + ib] *
              value[(ia - ib + n) % n];
  double var = 0.0;
  for (int ia = 0; ia < n; ++ia)
    for (int ib = 0; ib < n; ++ib) {
      const double dv = value[(ia - ib + n) % n] - mean;
      var += mass[static_cast<std::size_t>(ia) * n + ib] * dv * dv;
    }
  return {mean, var};
}

}  // namespace

double expectation(const StateTensor& state, std::string_view axis,
                   Rep observable, int moment) {
  if (moment != 1 && moment != 2)
    throw ValidityError(cat("unsupported moment ", moment));
  const int ax = state.axis_index(axis);
  const StateTensor* s = &state;
  StateTensor scratch;
  if (state.reps[ax] != observable) {
    scratch = transform_axis(state, axis, observable);
    s = &scratch;
  }
  const std::vector<double> mass = axis_mass(*s, ax);
  const std::vector<double>& vals = state.grid.values(observable);
  double acc = 0.0;
  for (int t = 0; t < state.grid.n; ++t)
    acc += (moment == 1 ? vals[t] : vals[t] * vals[t]) * mass[t];
  return acc;
}

PairMoments difference_moments(const StateTensor& state,
                               std::string_view axis_a,
                               std::string_view axis_b) {
  StateTensor s = transform_axis(state, axis_a, Rep::Position);
  s = transform_axis(s, axis_b, Rep::Position);
  const int n = s.grid.n;
  const std::vector<double> mass =
      pair_mass(s, s.axis_index(axis_a), s.axis_index(axis_b));
  // value[r] = wrapped difference for index offset r = (ia - ib) mod n
  std::vector<double> value(n);
  for (int r = 0; r < n; ++r)
    value[r] = s.grid.wrap_position(r * s.grid.spacing);
  return moments_from_values(mass, value, n);
}

PairMoments sum_moments(const StateTensor& state, std::string_view axis_a,
                        std::string_view axis_b) {
  StateTensor s = transform_axis(state, axis_a, Rep::Momentum);
  s = transform_axis(s, axis_b, Rep::Momentum);
  const int n = s.grid.n;
  const int ax_a = s.axis_index(axis_a);
  const int ax_b = s.axis_index(axis_b);
  const std::vector<double> mass = pair_mass(s, ax_a, ax_b);
  double mean = 0.0, var = 0.0;
  std::vector<double> value(static_cast<std::size_t>(n) * n);
  for (int ta = 0; ta < n; ++ta)
    for (int tb = 0; tb < n; ++tb) {
      const double k_sum = s.grid.momenta[ta] + s.grid.momenta[tb];
      value[static_cast<std::size_t>(ta) * n + tb] =
          s.grid.wrap_momentum(k_sum);
    }
  for (std::size_t i = 0; i < mass.size(); ++i) mean += mass[i] * value[i];
  for (std::size_t i = 0; i < mass.size(); ++i) {
    const double dv = value[i] - mean;
    var += mass[i] * dv * dv;
  }
  return {mean, var};
}

StateTensor permute_axes(const StateTensor& state,
                         const std::vector<std::string>& new_order) {
  const int n_ax = state.n_axes();
  if (static_cast<int>(new_order.size()) != n_ax)
    throw ValidityError("axis permutation must name every axis exactly once");
  std::vector<int> src(n_ax);
  for (int a = 0; a < n_ax; ++a) src[a] = state.axis_index(new_order[a]);
  std::vector<bool> seen(n_ax, false);
  for (int a : src) {
    if (seen[a])
      throw ValidityError("axis permutation repeats a label");
    seen[a] = true;
  }
  const int n = state.grid.n;
  std::vector<std::size_t> strides(n_ax);
  for (int a = 0; a < n_ax; ++a) strides[a] = ipow(n, n_ax - 1 - a);
  StateTensor out;
  out.grid = state.grid;
  out.labels = new_order;
  out.reps.resize(n_ax);
  for (int a = 0; a < n_ax; ++a) out.reps[a] = state.reps[src[a]];
  out.amps.resize(state.amps.size());
  std::vector<int> idx(n_ax, 0);
  const std::size_t total = state.amps.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (int a = 0; a < n_ax; ++a) {
      idx[a] = static_cast<int>(rem / strides[a]);
      rem %= strides[a];
    }
    std::size_t src_flat = 0;
    for (int a = 0; a < n_ax; ++a) src_flat += idx[a] * strides[src[a]];
    out.amps[flat] = state.amps[src_flat];
  }
  return out;
}

}  // namespace gedanken
