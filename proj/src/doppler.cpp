#include "gedanken/doppler.hpp"

#include <cmath>

#include "gedanken/error.hpp"
#include "gedanken/strings.hpp"

namespace gedanken {

using detail::cat;

namespace {

void validate(const CollisionInput& in) {
  if (!(in.omega_in > 0.0))
    throw ValidityError(cat("photon frequency must be positive, got ",
                            in.omega_in));
  if (!(in.mass > 0.0))
    throw ValidityError(cat("target mass must be positive, got ", in.mass));
  if (!(std::abs(in.v) < 0.1))
    throw ValidityError(cat("target velocity ", in.v,
                            " is outside the nonrelativistic window |v| < 0.1"));
}

}  // namespace

CollisionResult collide_exact(const CollisionInput& input) {
  validate(input);
  const double omega = input.omega_in;
  const double v = input.v;
  const double m = input.mass;
  // Positive root of s^2 + 2m(1-v)s - 4m omega = 0, rationalized so the
  // large-mass cancellation never happens:
  //   s = 4 omega / ((1-v) + sqrt((1-v)^2 + 4 omega / m)).
  const double one_minus_v = 1.0 - v;
  const double disc = one_minus_v * one_minus_v + 4.0 * omega / m;
  const double s = 4.0 * omega / (one_minus_v + std::sqrt(disc));
  CollisionResult r;
  r.omega_out = s - omega;
  if (!(r.omega_out > 0.0))
    throw ValidityError(cat("no positive outgoing frequency for omega=", omega,
                            ", v=", v, ", m=", m,
                            " (outside the validity window)"));
  r.v_out = v - s / m;
  // omega - omega' = 2 omega - s, evaluated via the quadratic in the
  // factored form s (s/(2m) - v): the direct subtraction cancels
  // catastrophically once the shift drops ~15 orders below omega.
  r.shift_exact = s * (s / (2.0 * m) - v);
  r.shift_expansion = 2.0 * omega * omega / m - 2.0 * v * omega;
  r.shift_doppler = -2.0 * v * omega;
  return r;
}

double shift_expansion(const CollisionInput& input) {
  validate(input);
  return 2.0 * input.omega_in * input.omega_in / input.mass -
         2.0 * input.v * input.omega_in;
}

double infer_velocity(double omega_in, double omega_out, double mass) {
  if (!(omega_in > 0.0) || !(omega_out > 0.0))
    throw ValidityError(cat("frequencies must be positive, got ", omega_in,
                            " and ", omega_out));
  if (!(mass > 0.0))
    throw ValidityError(cat("target mass must be positive, got ", mass));
  const double s = omega_in + omega_out;
  const double shift = omega_in - omega_out;
  const double v = s / (2.0 * mass) - shift / s;
  if (!(std::abs(v) < 0.1))
    throw ValidityError(cat("inferred velocity ", v,
                            " is outside the nonrelativistic window (inconsistent "
                            "frequencies)"));
  return v;
}

double readout_momentum(double mass, double omega_in, double omega_out) {
  return mass * infer_velocity(omega_in, omega_out, mass);
}

}  // namespace gedanken
