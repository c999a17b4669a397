#include "crossway/agent.hpp"

namespace crossway {

int wait_duration(ActionId a) {
  switch (a) {
    case ActionId::Go: return 0;
    case ActionId::Wait1: return 1;
    case ActionId::Wait2: return 2;
    case ActionId::Wait4: return 4;
    case ActionId::Wait8: return 8;
  }
  throw std::runtime_error("invalid action id");
}

std::string to_string(ActionId a) {
  switch (a) {
    case ActionId::Go: return "go";
    case ActionId::Wait1: return "wait1";
    case ActionId::Wait2: return "wait2";
    case ActionId::Wait4: return "wait4";
    case ActionId::Wait8: return "wait8";
  }
  throw std::runtime_error("invalid action id");
}

ActionId select_action(const std::array<double, kNumActions>& q, double epsilon,
                       Rng& rng) {
  for (double v : q) {
    if (!std::isfinite(v)) {
      throw std::runtime_error("action values are non-finite");
    }
  }
  if (epsilon > 0.0 && rng.uniform() < epsilon) {
    return kAllActions[rng.uniform_index(kNumActions)];
  }
  int best = 0;
  for (int a = 1; a < kNumActions; ++a) {
    if (q[a] > q[best]) best = a;  // strict: ties keep the lowest index
  }
  return kAllActions[best];
}

MacroResult execute_action(Simulation& sim, ActionId action) {
  MacroResult result;
  double dt = sim.config().dt;
  auto advance = [&](EgoCommand cmd) {
    StepEvents ev = sim.step(cmd);
    result.step_rewards.push_back(step_reward(ev));
    result.brake_time += ev.braking_vehicle_count * dt;
    result.last_events = ev;
    return ev.terminal();
  };

  if (action == ActionId::Go) {
    while (!advance(EgoCommand::Go)) {
    }
    result.terminal = true;
    return result;
  }
  int steps = wait_duration(action);
  for (int i = 0; i < steps; ++i) {
    if (advance(EgoCommand::Wait)) {
      result.terminal = true;
      break;
    }
  }
  return result;
}

std::vector<Experience> compute_returns(const AgentTrajectory& trajectory,
                                        double gamma) {
  if (!trajectory.terminal) {
    throw std::runtime_error("returns need a completed episode");
  }
  std::vector<Experience> out(trajectory.steps.size());
  double g = 0.0;  // discounted return from the end of the current decision
  for (std::size_t i = trajectory.steps.size(); i-- > 0;) {
    const DecisionStep& step = trajectory.steps[i];
    for (std::size_t j = step.step_rewards.size(); j-- > 0;) {
      g = step.step_rewards[j] + gamma * g;
    }
    if (g < kReturnLowerBound || g > kReturnUpperBound) {
      throw std::runtime_error("return target " + std::to_string(g) +
                               " escapes [-2, 1]; reward bookkeeping is broken");
    }
    out[i].state = step.state;
    out[i].action = static_cast<int>(step.action);
    out[i].target_return = g;
  }
  return out;
}

}  // namespace crossway
