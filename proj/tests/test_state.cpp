#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>

#include "doctest.h"
#include "gedanken/measurement.hpp"
#include "gedanken/state.hpp"
#include "oracles.hpp"

using namespace gedanken;

namespace {

PreparationParams small_params() {
  PreparationParams p;
  p.d = 3.0;
  p.sigma = 0.2;  // resolvable on the 64-point grid
  p.k0 = 0.0;
  return p;
}


}  // namespace

TEST_CASE("epr pair concentrates on x1 = x2 + d and k1 = -k2") {
  const Grid1D g = make_grid(128, 20.0);
  PreparationParams p;
  p.d = 3.0;
  p.sigma = 0.15;
  const StateTensor s = build_epr_state(g, p);
  CHECK(std::abs(norm_squared(s) - 1.0) < 1e-10);

  const Density pos = joint_density(s, {Rep::Position, Rep::Position});
  const int n = g.n;
  // every argmax-level cell sits on the wrapped difference d
  double peak = *std::max_element(pos.values.begin(), pos.values.end());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (pos.values[static_cast<std::size_t>(i) * n + j] < 0.999 * peak)
        continue;
      const double diff =
          g.wrap_position(g.positions[i] - g.positions[j] - p.d);
      CHECK(std::abs(diff) <= g.spacing);
    }

  const Density mom = joint_density(s, {Rep::Momentum, Rep::Momentum});
  peak = *std::max_element(mom.values.begin(), mom.values.end());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (mom.values[static_cast<std::size_t>(i) * n + j] < 0.999 * peak)
        continue;
      const double total = g.wrap_momentum(g.momenta[i] + g.momenta[j]);
      CHECK(std::abs(total) <= g.dk);
    }
}

TEST_CASE("epr pair with d=0 is swap symmetric") {
  const Grid1D g = make_grid(64, 20.0);
  PreparationParams p = small_params();
  p.d = 0.0;
  const StateTensor s = build_epr_state(g, p);
  const Density pos = joint_density(s, {Rep::Position, Rep::Position});
  const int n = g.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      CHECK(pos.values[static_cast<std::size_t>(i) * n + j] ==
            doctest::Approx(pos.values[static_cast<std::size_t>(j) * n + i])
                .epsilon(1e-12));
}

TEST_CASE("axis swap equals negated separation") {
  const Grid1D g = make_grid(64, 20.0);
  PreparationParams p = small_params();
  const StateTensor s = build_epr_state(g, p);
  const StateTensor swapped = permute_axes(s, {"particle2", "particle1"});
  PreparationParams q = p;
  q.d = -p.d;
  const StateTensor neg = build_epr_state(g, q);
  double worst = 0.0;
  for (std::size_t i = 0; i < neg.amps.size(); ++i)
    worst = std::max(worst, std::abs(swapped.amps[i] - neg.amps[i]));
  CHECK(worst < 1e-12);
}

TEST_CASE("epr construction is deterministic") {
  const Grid1D g = make_grid(64, 20.0);
  const StateTensor a = build_epr_state(g, small_params());
  const StateTensor b = build_epr_state(g, small_params());
  REQUIRE(a.amps.size() == b.amps.size());
  CHECK(std::memcmp(a.amps.data(), b.amps.data(),
                    a.amps.size() * sizeof(Complex)) == 0);
}

TEST_CASE("epr pair rejects separations that wrap the ridge") {
  const Grid1D g = make_grid(128, 20.0);
  PreparationParams p;
  p.d = 15.0;
  p.sigma = 0.15;
  CHECK_THROWS_AS(build_epr_state(g, p), ValidityError);
}

TEST_CASE("three-body state carries the separation in its relative "
          "coordinate") {
  const Grid1D g = make_grid(128, 20.0);
  PreparationParams p;
  p.d = 3.0;
  p.sigma = 0.15;
  const StateTensor s = build_bohr_state(g, p);
  CHECK(std::abs(norm_squared(s) - 1.0) < 1e-10);
  const PairMoments m = difference_moments(s, "particle1", "particle2");
  CHECK(std::abs(m.mean - 3.0) <= 0.015);  // d within sigma/10
  CHECK(m.variance ==
        doctest::Approx(2.0 * p.sigma * p.sigma).epsilon(0.20));
}

TEST_CASE("initial diaphragm momentum shifts its momentum marginal") {
  const Grid1D g = make_grid(64, 20.0);
  PreparationParams p = small_params();
  p.k0 = g.dk;  // one lattice unit
  const StateTensor s = build_bohr_state(g, p);
  const Density spec = pointer_spectrum(s, "diaphragm", Rep::Momentum);
  int argmax = 0;
  for (int t = 0; t < g.n; ++t)
    if (spec.values[t] > spec.values[argmax]) argmax = t;
  CHECK(g.momenta[argmax] == doctest::Approx(g.dk).epsilon(1e-12));
}

TEST_CASE("gaussian envelopes keep the ridges and broaden the momentum "
          "marginals") {
  const Grid1D g = make_grid(64, 20.0);
  PreparationParams unit = small_params();
  PreparationParams gauss = small_params();
  gauss.envelope1 = {EnvelopeKind::Gaussian, 0.0, 1.5};
  gauss.envelope2 = {EnvelopeKind::Gaussian, -gauss.d, 1.5};
  const StateTensor su = build_bohr_state(g, unit);
  const StateTensor sg = build_bohr_state(g, gauss);

  const PairMoments mu = difference_moments(su, "particle1", "particle2");
  const PairMoments mg = difference_moments(sg, "particle1", "particle2");
  CHECK(mg.mean == doctest::Approx(mu.mean).epsilon(0.01));
  CHECK(mg.variance == doctest::Approx(mu.variance).epsilon(0.05));

  // particle 1's momentum marginal gains the envelope's 1/(2w) width
  const Density pu = pointer_spectrum(su, "particle1", Rep::Momentum);
  const Density pg = pointer_spectrum(sg, "particle1", Rep::Momentum);
  std::vector<double> wu(g.n), wg(g.n);
  for (int t = 0; t < g.n; ++t) {
    wu[t] = pu.values[t] * g.dk;
    wg[t] = pg.values[t] * g.dk;
  }
  const double std_u = oracle::density_moments(g.momenta, wu).std;
  const double std_g = oracle::density_moments(g.momenta, wg).std;
  const double envelope_width = 1.0 / (2.0 * 1.5);
  CHECK(std_g > std_u);
  CHECK(std_g * std_g ==
        doctest::Approx(std_u * std_u + envelope_width * envelope_width)
            .epsilon(0.05));
}

TEST_CASE("three-body construction rejects oversized grids") {
  PreparationParams p;
  p.sigma = 0.5;
  CHECK_THROWS_AS(build_bohr_state(make_grid(256, 40.0), p), ValidityError);
}

TEST_CASE("transform_axis is a per-axis unitary") {
  const Grid1D g = make_grid(64, 20.0);
  const StateTensor s = build_bohr_state(g, small_params());
  const StateTensor k = transform_axis(s, "diaphragm", Rep::Momentum);
  CHECK(std::abs(norm_squared(k) - 1.0) < 1e-10);
  CHECK(k.reps[2] == Rep::Momentum);
  CHECK(k.reps[0] == Rep::Position);
  const StateTensor back = transform_axis(k, "diaphragm", Rep::Position);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.amps.size(); ++i)
    worst = std::max(worst, std::abs(s.amps[i] - back.amps[i]));
  CHECK(worst < 1e-10);

  const StateTensor same = transform_axis(s, "particle1", Rep::Position);
  CHECK(std::memcmp(same.amps.data(), s.amps.data(),
                    s.amps.size() * sizeof(Complex)) == 0);
  CHECK_THROWS_AS(transform_axis(s, "no_such_axis", Rep::Momentum),
                  ValidityError);
}

TEST_CASE("expectation reads out kernel centers and plane-wave momenta") {
  const Grid1D g = make_grid(128, 20.0);
  const ComplexVector kernel = gaussian_kernel(g, 2.0, 0.3);
  StateTensor s;
  s.grid = g;
  s.labels = {"particle1"};
  s.reps = {Rep::Position};
  s.amps = kernel.values;
  CHECK(expectation(s, "particle1", Rep::Position, 1) ==
        doctest::Approx(2.0).epsilon(1e-6));

  const double k0 = g.momenta[80];
  StateTensor modulated = s;
  for (int j = 0; j < g.n; ++j)
    modulated.amps[j] = kernel.values[j] * std::polar(1.0, k0 * g.positions[j]);
  const double k_mean = expectation(modulated, "particle1", Rep::Momentum, 1);
  CHECK(std::abs(k_mean - k0) <= g.dk);

  const double second = expectation(s, "particle1", Rep::Position, 2);
  CHECK(second - 4.0 == doctest::Approx(0.3 * 0.3).epsilon(0.01));
  CHECK_THROWS_AS(expectation(s, "particle1", Rep::Position, 3),
                  ValidityError);
}

TEST_CASE("normalize restores unit norm and rejects the zero tensor") {
  const Grid1D g = make_grid(64, 20.0);
  const StateTensor s = build_epr_state(g, small_params());
  StateTensor scaled = s;
  for (Complex& c : scaled.amps) c *= 5.0;
  const StateTensor renorm = normalized(scaled);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.amps.size(); ++i)
    worst = std::max(worst, std::abs(renorm.amps[i] - s.amps[i]));
  CHECK(worst < 1e-12);

  StateTensor zero = s;
  for (Complex& c : zero.amps) c = 0.0;
  CHECK_THROWS_AS(normalized(zero), ValidityError);
}
