#include "crossway/idm.hpp"

#include <algorithm>
#include <cmath>

namespace crossway {

double idm_acceleration(double v, double gap, double lead_speed,
                        const IdmParams& p) {
  if (!(gap > 0.0)) return -kEmergencyDecel;

  double free_term = std::pow(v / p.desired_speed, 4.0);
  double interaction = 0.0;
  if (std::isfinite(gap)) {
    double dv = v - lead_speed;
    double dynamic =
        v * p.headway_time +
        v * dv / (2.0 * std::sqrt(p.max_accel * p.comfortable_decel));
    double s_star = p.min_gap + std::max(0.0, dynamic);
    interaction = (s_star / gap) * (s_star / gap);
  }
  double a = p.max_accel * (1.0 - free_term - interaction);
  return std::max(a, -kEmergencyDecel);
}

double krauss_speed_update(double v, double v_desired, double sigma,
                           double max_accel, double dt, Rng& rng) {
  double u = rng.uniform();
  double v_next = std::min(v_desired, v + max_accel * dt);
  v_next -= sigma * max_accel * dt * u;
  return std::max(0.0, v_next);
}

}  // namespace crossway
