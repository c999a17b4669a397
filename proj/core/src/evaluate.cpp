#include "crossway/evaluate.hpp"

#include <stdexcept>

#include "crossway/agent.hpp"

namespace crossway {

EvaluationReport evaluate(const QNetwork& net, ScenarioId task, int n_episodes,
                          const SimConfig& sim_cfg, std::uint64_t seed) {
  if (n_episodes < 1) {
    throw std::runtime_error("evaluation needs at least one episode");
  }
  EvaluationReport rep;
  rep.task = task;
  rep.n_episodes = n_episodes;

  int successes = 0, collisions = 0;
  double success_time_sum = 0.0;
  double brake_time_sum = 0.0;
  for (int e = 0; e < n_episodes; ++e) {
    AgentEpisode ep = run_agent_episode(net, task, sim_cfg, 0.0,
                                        derive_seed(seed, e), nullptr);
    brake_time_sum += ep.brake_time;
    if (ep.outcome == Outcome::Success) {
      ++successes;
      success_time_sum += ep.elapsed_time;
    } else if (ep.outcome == Outcome::Collision) {
      ++collisions;
    }
  }
  double n = static_cast<double>(n_episodes);
  rep.pct_success = 100.0 * successes / n;
  rep.pct_collision = 100.0 * collisions / n;
  rep.pct_timeout = 100.0 * (n_episodes - successes - collisions) / n;
  rep.avg_time_success = successes > 0 ? success_time_sum / successes : 0.0;
  rep.avg_brake_time = brake_time_sum / n;
  return rep;
}

}  // namespace crossway
