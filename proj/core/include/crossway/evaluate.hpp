#pragma once

#include <cstdint>

#include "crossway/qnetwork.hpp"
#include "crossway/sim.hpp"

namespace crossway {

// The four crossing metrics for one (network, task) pair, in percent and
// seconds.
struct EvaluationReport {
  ScenarioId task = ScenarioId::Right;
  int n_episodes = 0;
  double pct_success = 0.0;
  double pct_collision = 0.0;
  double pct_timeout = 0.0;        // = 100 - success - collision
  double avg_time_success = 0.0;   // mean time to cross, successful episodes
  double avg_brake_time = 0.0;     // mean traffic braking time per episode
};

/// Plays n_episodes greedy (epsilon = 0) episodes on fresh simulators with
/// per-episode seeds derived from seed. Touches no training state: the
/// network is read-only and every RNG lives inside this call.
EvaluationReport evaluate(const QNetwork& net, ScenarioId task, int n_episodes,
                          const SimConfig& sim_cfg, std::uint64_t seed);

}  // namespace crossway
