#pragma once

#include <limits>

#include "crossway/rng.hpp"

namespace crossway {

// Intelligent-driver-model parameters. Defaults are conventional values for
// urban traffic with a 20 m/s limit.
struct IdmParams {
  double desired_speed = 20.0;     // v0 [m/s]
  double max_accel = 2.0;          // a [m/s^2]
  double comfortable_decel = 2.0;  // b [m/s^2]
  double min_gap = 2.0;            // s0 [m]
  double headway_time = 1.0;       // T [s]
};

// Gap value meaning "no leader".
inline constexpr double kFreeRoadGap = std::numeric_limits<double>::infinity();

// Deceleration returned when the bumper gap is non-positive; large enough to
// stop any admissible speed within one 0.2 s step once the integrator clamps
// speed at zero.
inline constexpr double kEmergencyDecel = 100.0;

// IDM acceleration: a * [1 - (v/v0)^4 - (s*/gap)^2] with
// s* = s0 + max(0, v*T + v*(v - v_lead) / (2*sqrt(a*b))).
// gap is the bumper-to-bumper distance to the leader; pass kFreeRoadGap when
// there is none. The result is bounded below by -kEmergencyDecel.
double idm_acceleration(double v, double gap, double lead_speed,
                        const IdmParams& p);

// Krauss stochastic imperfection on top of a desired speed:
//   v' = max(0, min(v_desired, v + max_accel*dt) - sigma*max_accel*dt*u),
// u ~ Uniform[0,1) drawn from rng (one draw per call, for any sigma).
double krauss_speed_update(double v, double v_desired, double sigma,
                           double max_accel, double dt, Rng& rng);

}  // namespace crossway
