#include "gedanken/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "gedanken/strings.hpp"

namespace gedanken {

using detail::cat;

namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

std::vector<std::size_t> axis_strides(int n, int n_axes) {
  std::vector<std::size_t> s(n_axes);
  for (int a = 0; a < n_axes; ++a) s[a] = ipow(n, n_axes - 1 - a);
  return s;
}

constexpr double kNullOutcome = 1e-14;

}  // namespace

int Density::axis_index(std::string_view label) const {
  for (int a = 0; a < n_axes(); ++a)
    if (axes[a] == label) return a;
  throw ValidityError(cat("unknown axis label '", std::string(label), "'"));
}

double density_sum(const Density& density) {
  return std::accumulate(density.values.begin(), density.values.end(), 0.0) *
         density.cell;
}

PostselectionResult postselect(const StateTensor& state,
                               const PointerSpec& pointer) {
  if (state.n_axes() < 2)
    throw ValidityError("postselection must leave at least one axis");
  const StateTensor work = transform_axis(state, pointer.axis, pointer.basis);
  const int ax = work.axis_index(pointer.axis);
  const Grid1D& grid = work.grid;
  const std::vector<double>& lattice = grid.values(pointer.basis);
  if (pointer.value < lattice.front() - 0.5 * grid.cell(pointer.basis) ||
      pointer.value > lattice.back() + 0.5 * grid.cell(pointer.basis))
    throw ValidityError(cat("pointer value ", pointer.value,
                            " lies outside the ", to_string(pointer.basis),
                            " lattice"));
  if (pointer.smearing != 0.0 && pointer.smearing < grid.cell(pointer.basis))
    throw ValidityError(cat("pointer smearing ", pointer.smearing,
                            " is below one lattice cell (use 0 for a sharp "
                            "slice)"));
  const int slot = grid.nearest_index(pointer.basis, pointer.value);
  const double snapped = lattice[slot];

  // Unit-normalized pointer amplitudes on the axis lattice.
  const int n = grid.n;
  const double axis_cell = grid.cell(pointer.basis);
  std::vector<double> pointer_amp(n, 0.0);
  if (pointer.smearing == 0.0) {
    pointer_amp[slot] = 1.0 / std::sqrt(axis_cell);
  } else {
    const double denom = 4.0 * pointer.smearing * pointer.smearing;
    double nrm = 0.0;
    for (int t = 0; t < n; ++t) {
      const double u = lattice[t] - snapped;
      pointer_amp[t] = std::exp(-u * u / denom);
      nrm += pointer_amp[t] * pointer_amp[t];
    }
    const double inv = 1.0 / std::sqrt(nrm * axis_cell);
    for (double& a : pointer_amp) a *= inv;
  }

  const int n_ax = work.n_axes();
  const std::size_t stride = ipow(n, n_ax - 1 - ax);
  const std::size_t n_outer = ipow(n, ax);

  PostselectionResult result;
  result.snapped_value = snapped;
  result.snap_distance = pointer.value - snapped;
  StateTensor& out = result.state;
  out.grid = grid;
  for (int a = 0; a < n_ax; ++a) {
    if (a == ax) continue;
    out.labels.push_back(work.labels[a]);
    out.reps.push_back(work.reps[a]);
  }
  out.amps.assign(work.amps.size() / n, Complex{0.0, 0.0});

  // Contract: psi'(rest) = sum_t conj(p_t) psi(t, rest) * cell.
  for (std::size_t o = 0; o < n_outer; ++o) {
    const std::size_t in_block = o * stride * n;
    const std::size_t out_block = o * stride;
    for (int t = 0; t < n; ++t) {
      const double w = pointer_amp[t] * axis_cell;
      if (w == 0.0) continue;
      const std::size_t base = in_block + t * stride;
      for (std::size_t i = 0; i < stride; ++i)
        out.amps[out_block + i] += w * work.amps[base + i];
    }
  }

  result.probability = norm_squared(out);
  if (result.probability < kNullOutcome)
    throw ValidityError(cat("postselection on null outcome (probability ",
                            result.probability, " at ", to_string(pointer.basis),
                            " = ", snapped, ")"));
  out = normalized(out);
  return result;
}

Density joint_density(const StateTensor& state,
                      const std::vector<Rep>& target_reps) {
  if (static_cast<int>(target_reps.size()) != state.n_axes())
    throw ValidityError("joint_density needs one representation per axis");
  StateTensor work = state;
  for (int a = 0; a < state.n_axes(); ++a)
    work = transform_axis(work, work.labels[a], target_reps[a]);
  Density d;
  d.grid = work.grid;
  d.axes = work.labels;
  d.reps = work.reps;
  d.cell = work.cell_measure();
  d.values.resize(work.amps.size());
  for (std::size_t i = 0; i < work.amps.size(); ++i)
    d.values[i] = std::norm(work.amps[i]);
  return d;
}

Density marginal(const Density& density,
                 const std::vector<std::string>& keep) {
  if (keep.empty())
    throw ValidityError("marginal needs at least one axis to keep");
  std::vector<int> kept;
  for (int a = 0; a < density.n_axes(); ++a) {
    const bool requested =
        std::find(keep.begin(), keep.end(), density.axes[a]) != keep.end();
    if (requested) kept.push_back(a);
  }
  if (kept.size() != keep.size())
    throw ValidityError("marginal keep set names an unknown axis");
  const int n = density.grid.n;
  const auto strides = axis_strides(n, density.n_axes());
  Density out;
  out.grid = density.grid;
  out.cell = 1.0;
  for (int a : kept) {
    out.axes.push_back(density.axes[a]);
    out.reps.push_back(density.reps[a]);
    out.cell *= density.grid.cell(density.reps[a]);
  }
  const double dropped_cell = density.cell / out.cell;
  const auto out_strides = axis_strides(n, static_cast<int>(kept.size()));
  out.values.assign(ipow(n, static_cast<int>(kept.size())), 0.0);
  for (std::size_t idx = 0; idx < density.values.size(); ++idx) {
    std::size_t out_idx = 0;
    for (std::size_t t = 0; t < kept.size(); ++t)
      out_idx +=
          (static_cast<std::size_t>(idx / strides[kept[t]]) % n) * out_strides[t];
    out.values[out_idx] += density.values[idx];
  }
  for (double& v : out.values) v *= dropped_cell;
  // Guard renormalization (exact summation already preserves mass).
  const double total = density_sum(out);
  if (total > 0.0)
    for (double& v : out.values) v /= total;
  return out;
}

Density conditional(const Density& density, std::string_view given_axis,
                    double given_value) {
  const int ax = density.axis_index(given_axis);
  const int n = density.grid.n;
  const int slot = density.grid.nearest_index(density.reps[ax], given_value);
  const auto strides = axis_strides(n, density.n_axes());
  Density out;
  out.grid = density.grid;
  out.cell = 1.0;
  for (int a = 0; a < density.n_axes(); ++a) {
    if (a == ax) continue;
    out.axes.push_back(density.axes[a]);
    out.reps.push_back(density.reps[a]);
    out.cell *= density.grid.cell(density.reps[a]);
  }
  if (out.axes.empty())
    throw ValidityError("conditioning a 1-axis density leaves nothing");
  out.values.assign(density.values.size() / n, 0.0);
  const auto out_strides = axis_strides(n, out.n_axes());
  for (std::size_t idx = 0; idx < density.values.size(); ++idx) {
    if (static_cast<int>(idx / strides[ax]) % n != slot) continue;
    std::size_t out_idx = 0;
    int t = 0;
    for (int a = 0; a < density.n_axes(); ++a) {
      if (a == ax) continue;
      out_idx += (static_cast<std::size_t>(idx / strides[a]) % n) *
                 out_strides[t++];
    }
    out.values[out_idx] = density.values[idx];
  }
  const double mass = density_sum(out) * density.grid.cell(density.reps[ax]);
  if (mass < kNullOutcome)
    throw ValidityError(cat("conditional on a null slice (mass ", mass, ")"));
  const double total = density_sum(out);
  for (double& v : out.values) v /= total;
  return out;
}

namespace {

double wrap_into(double t, double period) {
  return t - period * std::floor(t / period + 0.5);
}

struct WeightedLine {
  double slope = 0.0;
  double offset = 0.0;
};

WeightedLine weighted_least_squares(const std::vector<double>& x,
                                    const std::vector<double>& y,
                                    const std::vector<double>& w) {
  double W = 0.0, mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    W += w[i];
    mx += w[i] * x[i];
    my += w[i] * y[i];
  }
  mx /= W;
  my /= W;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
  }
  WeightedLine line;
  line.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  line.offset = my - line.slope * mx;
  return line;
}

double product_distance(const Density& d) {
  const int n = d.grid.n;
  const double cu = d.grid.cell(d.reps[0]);
  const double cv = d.grid.cell(d.reps[1]);
  std::vector<double> pu(n, 0.0), pv(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double p = d.values[static_cast<std::size_t>(i) * n + j];
      pu[i] += p * cv;
      pv[j] += p * cu;
    }
  double tv = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      tv += std::abs(d.values[static_cast<std::size_t>(i) * n + j] -
                     pu[i] * pv[j]);
  return 0.5 * tv * cu * cv;
}

}  // namespace

CorrelationReport ridge_fit(const Density& density) {
  if (density.n_axes() != 2)
    throw ValidityError("ridge_fit needs a 2-axis density");
  const int n = density.grid.n;
  const std::vector<double>& u = density.grid.values(density.reps[0]);
  const std::vector<double>& v = density.grid.values(density.reps[1]);
  const double period_u = n * density.grid.cell(density.reps[0]);
  const double period_v = n * density.grid.cell(density.reps[1]);

  // Column masses (axis 1 fixed) and support check.
  std::vector<double> col_mass(n, 0.0);
  std::vector<double> row_mass(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double p = density.values[static_cast<std::size_t>(i) * n + j];
      col_mass[j] += p;
      row_mass[i] += p;
    }
  const double max_col = *std::max_element(col_mass.begin(), col_mass.end());
  const double max_row = *std::max_element(row_mass.begin(), row_mass.end());
  int live_cols = 0, live_rows = 0;
  for (int j = 0; j < n; ++j)
    if (col_mass[j] > 1e-12 * max_col) ++live_cols;
  for (int i = 0; i < n; ++i)
    if (row_mass[i] > 1e-12 * max_row) ++live_rows;
  if (live_cols < 2 || live_rows < 2)
    throw ValidityError("ridge_fit on a density with degenerate support");

  // Circular conditional means of axis 0 per column.
  std::vector<double> mean_u(n, 0.0), weight(n, 0.0);
  std::vector<int> live;
  live.reserve(n);
  for (int j = 0; j < n; ++j) {
    if (col_mass[j] <= 1e-12 * max_col) continue;
    Complex z{0.0, 0.0};
    double lin = 0.0;
    for (int i = 0; i < n; ++i) {
      const double p = density.values[static_cast<std::size_t>(i) * n + j];
      z += p * std::polar(1.0, 2.0 * kPi * u[i] / period_u);
      lin += p * u[i];
    }
    if (std::abs(z) > 1e-12 * col_mass[j])
      mean_u[j] = std::arg(z) * period_u / (2.0 * kPi);
    else
      mean_u[j] = lin / col_mass[j];  // flat column, roots of unity cancel
    weight[j] = col_mass[j];
    live.push_back(j);
  }

  // Winding detection: coherence of (mean_u - q * scale * v) on the axis-0
  // circle over windings q in {0, +1, -1}.
  const double scale = period_u / period_v;
  double best_coherence = -1.0;
  int best_q = 0;
  Complex best_phase{0.0, 0.0};
  double total_w = 0.0;
  for (int j : live) total_w += weight[j];
  for (int q : {0, 1, -1}) {
    Complex acc{0.0, 0.0};
    for (int j : live)
      acc += weight[j] * std::polar(1.0, 2.0 * kPi *
                                             (mean_u[j] - q * scale * v[j]) /
                                             period_u);
    const double coherence = std::abs(acc) / total_w;
    if (coherence > best_coherence + 1e-12) {
      best_coherence = coherence;
      best_q = q;
      best_phase = acc;
    }
  }

  CorrelationReport report;
  std::vector<double> xs, ys, ws;
  xs.reserve(live.size());
  ys.reserve(live.size());
  ws.reserve(live.size());
  const bool wrapped_path = best_coherence >= 0.5;
  if (wrapped_path) {
    const double delta = std::arg(best_phase) * period_u / (2.0 * kPi);
    for (int j : live) {
      const double base = best_q * scale * v[j] + delta;
      xs.push_back(v[j]);
      ys.push_back(base + wrap_into(mean_u[j] - base, period_u));
      ws.push_back(weight[j]);
    }
  } else {
    for (int j : live) {
      double lin = 0.0;
      for (int i = 0; i < n; ++i)
        lin += density.values[static_cast<std::size_t>(i) * n + j] * u[i];
      xs.push_back(v[j]);
      ys.push_back(lin / col_mass[j]);
      ws.push_back(weight[j]);
    }
  }
  const WeightedLine line = weighted_least_squares(xs, ys, ws);
  report.ridge_slope = line.slope;
  report.ridge_offset = line.offset;

  // Pearson over the joint, axis-0 coordinates unwrapped around the fitted
  // line when the wrapped branch is the coherent one.
  double W = 0.0, mu = 0.0, mv = 0.0;
  std::vector<double> line_at(n, 0.0);
  for (int j = 0; j < n; ++j)
    line_at[j] = line.offset + line.slope * v[j];
  auto unwrapped_u = [&](int i, int j) {
    if (!wrapped_path) return u[i];
    return line_at[j] + wrap_into(u[i] - line_at[j], period_u);
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double p = density.values[static_cast<std::size_t>(i) * n + j];
      if (p == 0.0) continue;
      W += p;
      mu += p * unwrapped_u(i, j);
      mv += p * v[j];
    }
  mu /= W;
  mv /= W;
  double suu = 0.0, svv = 0.0, suv = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double p = density.values[static_cast<std::size_t>(i) * n + j];
      if (p == 0.0) continue;
      const double du = unwrapped_u(i, j) - mu;
      const double dv = v[j] - mv;
      suu += p * du * du;
      svv += p * dv * dv;
      suv += p * du * dv;
    }
  if (suu > 0.0 && svv > 0.0)
    report.pearson = std::clamp(suv / std::sqrt(suu * svv), -1.0, 1.0);
  report.flatness_tv = product_distance(density);
  return report;
}

double total_variation(const Density& d1, const Density& d2) {
  if (d1.axes != d2.axes || d1.reps != d2.reps || !(d1.grid == d2.grid))
    throw ValidityError("total_variation on mismatched densities");
  double acc = 0.0;
  for (std::size_t i = 0; i < d1.values.size(); ++i)
    acc += std::abs(d1.values[i] - d2.values[i]);
  return 0.5 * acc * d1.cell;
}

Density pointer_spectrum(const StateTensor& state, std::string_view axis,
                         Rep basis) {
  StateTensor work = transform_axis(state, axis, basis);
  std::vector<Rep> reps = work.reps;
  Density full = joint_density(work, reps);
  return marginal(full, {std::string(axis)});
}

}  // namespace gedanken
