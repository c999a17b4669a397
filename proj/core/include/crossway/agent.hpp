#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "crossway/qnetwork.hpp"
#include "crossway/replay.hpp"
#include "crossway/rmsprop.hpp"
#include "crossway/rng.hpp"
#include "crossway/sim.hpp"

namespace crossway {

// One go action plus the wait action at four time scales. Indices match the
// network's five outputs.
enum class ActionId { Go = 0, Wait1 = 1, Wait2 = 2, Wait4 = 3, Wait8 = 4 };

inline constexpr std::array<ActionId, 5> kAllActions = {
    ActionId::Go, ActionId::Wait1, ActionId::Wait2, ActionId::Wait4,
    ActionId::Wait8};

/// Simulator steps a wait action spans. Go has no fixed span: it commits the
/// ego and runs the episode to its end.
int wait_duration(ActionId a);

std::string to_string(ActionId a);

/// Epsilon-greedy: with probability epsilon a uniform action (one uniform
/// draw for the coin, one for the choice), otherwise the argmax with
/// lowest-index tie-break. epsilon = 0 draws nothing from the rng.
ActionId select_action(const std::array<double, kNumActions>& q, double epsilon,
                       Rng& rng);

// One agent decision: the observed grid, the chosen action, and the reward
// of every simulator step the action consumed.
struct DecisionStep {
  OccupancyGrid state;
  ActionId action = ActionId::Go;
  std::vector<double> step_rewards;
};

struct AgentTrajectory {
  std::vector<DecisionStep> steps;
  bool terminal = false;
  Outcome outcome = Outcome::Timeout;
};

struct MacroResult {
  std::vector<double> step_rewards;
  bool terminal = false;
  StepEvents last_events;
  double brake_time = 0.0;  // braking vehicles * dt, summed over the steps
};

/// Runs one action to completion: WaitK advances K steps (ending early on a
/// terminal event), Go commits the ego and runs until the episode ends.
/// Throws std::logic_error on a terminated episode.
MacroResult execute_action(Simulation& sim, ActionId action);

/// Full-episode discounted returns, discounting per simulator step: the
/// target of decision t is sum_j gamma^j r_j over all remaining step rewards.
/// Throws std::runtime_error on a non-terminal trajectory or a target
/// outside [-2, 1].
std::vector<Experience> compute_returns(const AgentTrajectory& trajectory,
                                        double gamma);

// Lowest/highest value any return target may take; derived from the reward
// shaping (at most 100 step costs plus one terminal reward).
inline constexpr double kReturnLowerBound = -2.0;
inline constexpr double kReturnUpperBound = 1.0;

struct AgentEpisode {
  AgentTrajectory trajectory;
  Outcome outcome = Outcome::Timeout;
  int steps = 0;
  double elapsed_time = 0.0;
  double total_reward = 0.0;
  double brake_time = 0.0;
  double time_to_cross = 0.0;  // equals elapsed_time (episodes end at the goal)
};

/// Plays one episode with the network driving action selection.
/// explore_rng supplies the epsilon-greedy draws and may be null when
/// epsilon = 0 (greedy evaluation).
template <class Net>
AgentEpisode run_agent_episode(const Net& net, ScenarioId task,
                               const SimConfig& sim_cfg, double epsilon,
                               std::uint64_t episode_seed, Rng* explore_rng) {
  if (epsilon > 0.0 && explore_rng == nullptr) {
    throw std::logic_error("exploration requires an rng");
  }
  SimConfig cfg = sim_cfg;
  cfg.rng_seed = episode_seed;
  Simulation sim(task, cfg);
  const GridFrame& frame = default_grid_frame();

  AgentEpisode ep;
  Rng unused(0);
  while (!sim.terminated()) {
    DecisionStep step;
    step.state = encode(sim.state(), frame);
    std::array<double, kNumActions> q = net.forward(step.state);
    step.action = select_action(q, epsilon, explore_rng ? *explore_rng : unused);
    MacroResult r = execute_action(sim, step.action);
    for (double rew : r.step_rewards) ep.total_reward += rew;
    ep.brake_time += r.brake_time;
    step.step_rewards = std::move(r.step_rewards);
    ep.trajectory.steps.push_back(std::move(step));
    if (r.terminal) {
      ep.outcome = r.last_events.collision
                       ? Outcome::Collision
                       : (r.last_events.ego_reached_goal ? Outcome::Success
                                                         : Outcome::Timeout);
    }
  }
  ep.trajectory.terminal = true;
  ep.trajectory.outcome = ep.outcome;
  ep.steps = sim.state().step;
  ep.elapsed_time = ep.steps * cfg.dt;
  ep.time_to_cross = ep.elapsed_time;
  return ep;
}

/// One optimizer step on a batch: per-experience loss is the squared error
/// between the stored return and the taken action's value; the gradient flows
/// only through that output. Returns the mean loss. Works for any network
/// following the QNetwork conventions (the toy dense networks included).
/// Throws std::runtime_error on a non-finite loss.
template <class Net, class Batch>
double train_step(Net& net, RmsProp& opt, const Batch& batch) {
  std::size_t n = 0;
  for ([[maybe_unused]] const auto* e : batch) ++n;
  if (n == 0) throw std::runtime_error("empty training batch");

  std::vector<double> grads(net.params().size(), 0.0);
  typename Net::Cache cache;
  double loss_sum = 0.0;
  for (const auto* e : batch) {
    auto q = net.forward(e->state, &cache);
    double err = e->target_return - q[e->action];
    loss_sum += err * err;
    auto dq = q;
    for (auto& v : dq) v = 0.0;
    // d/dq of mean squared error, scaled by 1/n below via linearity.
    dq[e->action] = -2.0 * err;
    net.backward(e->state, cache, dq, grads);
  }
  double mean_loss = loss_sum / static_cast<double>(n);
  if (!std::isfinite(mean_loss)) {
    throw std::runtime_error("training diverged: non-finite batch loss " +
                             std::to_string(mean_loss));
  }
  for (double& g : grads) g /= static_cast<double>(n);
  opt.update(net.params(), grads);
  return mean_loss;
}

}  // namespace crossway
