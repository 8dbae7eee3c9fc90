#pragma once

namespace gedanken {

// Nonrelativistic 1-D back-reflection of a photon off a massive target
// (electron or diaphragm), hbar = c = 1.  Conservation pair:
//
//   omega + m v^2 / 2 = omega' + m v'^2 / 2
//   m v - omega       = m v' + omega'
//
// valid for |v| << 1 and omega << m.
struct CollisionInput {
  double omega_in = 1.0;  // incident photon frequency, > 0
  double v = 0.0;         // target velocity, |v| < 0.1
  double mass = 1e9;      // target mass, > 0
};

struct CollisionResult {
  double omega_out = 0.0;        // outgoing photon frequency
  double v_out = 0.0;            // outgoing target velocity
  double shift_exact = 0.0;      // omega - omega'
  double shift_expansion = 0.0;  // 2 omega^2 / m - 2 v omega
  double shift_doppler = 0.0;    // large-mass limit, -2 v omega
};

// Closed-form solution via the quadratic in s = omega + omega':
// s^2 + 2 m (1 - v) s - 4 m omega = 0, positive root, evaluated in the
// cancellation-free rationalized form.  Both conservation laws hold to
// 1e-12 relative.
CollisionResult collide_exact(const CollisionInput& input);

// The quadratic-expansion shift with omega + omega' -> 2 omega.
double shift_expansion(const CollisionInput& input);

// Exact inversion of the conservation pair for the pre-collision velocity:
// v = (omega + omega') / (2 m) - (omega - omega') / (omega + omega').
double infer_velocity(double omega_in, double omega_out, double mass);

// mass * infer_velocity: the target momentum read out from the frequency
// shift.
double readout_momentum(double mass, double omega_in, double omega_out);

}  // namespace gedanken
