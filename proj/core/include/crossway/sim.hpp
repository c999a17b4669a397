#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "crossway/geometry.hpp"
#include "crossway/idm.hpp"
#include "crossway/rng.hpp"
#include "crossway/scenario.hpp"

namespace crossway {

// Per-step reward shaping: a small time cost every step plus a terminal
// bonus/penalty. Total episode reward therefore lies in [-2, +1].
inline constexpr double kStepCost = -0.01;
inline constexpr double kSuccessReward = 1.0;
inline constexpr double kCollisionPenalty = -1.0;

// A traffic car counts as braking when its realized acceleration over the
// step is below this threshold (m/s^2).
inline constexpr double kBrakingAccelThreshold = -0.5;

// No spawn while another car occupies the first stretch of the lane.
inline constexpr double kSpawnClearance = 15.0;

// Traffic within this lateral distance of the ego route (meters) acts as an
// IDM leader for the ego.
inline constexpr double kEgoCorridorHalfWidth = 1.5;

// Traffic follows the ego as a same-lane leader once the ego is on the lane:
// heading within this cosine of the travel direction and this close to the
// centerline.
inline constexpr double kTrafficSeesEgoCos = 0.8;
inline constexpr double kTrafficSeesEgoLateral = 2.0;

// A committed ego claims the crossing point of every lane its route still has
// to traverse; approaching cars brake for the claim, but at most this hard
// (m/s^2). Cars with room to stop yield to the occupied junction; cars caught
// inside their braking distance still reach it.
inline constexpr double kYieldDecelLimit = 4.5;

enum class EgoCommand { Wait = 0, Go = 1 };

struct SimConfig {
  double dt = 0.2;                             // seconds per step
  int max_steps = 100;                         // 20 s episode cap
  double depart_probability_per_second = 0.2;  // per lane
  // Traffic-only pre-roll before the first observation, so episodes begin on
  // a road already at steady-state density rather than an empty one.
  double warmup_seconds = 8.0;
  IdmParams idm;
  double krauss_sigma = 0.5;
  std::uint64_t rng_seed = 0;

  /// Throws std::runtime_error naming the first field out of range.
  void validate() const;

  /// Per-step Bernoulli probability matching the per-second rate:
  /// 1 - (1 - p_per_second)^dt.
  double per_step_spawn_probability() const;
};

struct VehicleState {
  int id = 0;
  int lane_id = 0;
  double position = 0.0;  // arclength along the lane centerline
  double speed = 0.0;     // m/s, never negative
  double length = 0.0;
  double width = 0.0;
  // Derived quantities, refreshed by the simulator after every move.
  Vec2 pos;               // world position of the vehicle center
  Vec2 heading;           // unit vector
  double accel = 0.0;     // realized (v_new - v_old) / dt of the last step
};

struct EgoState {
  double path_s = 0.0;  // arclength along the ego route
  double speed = 0.0;
  bool committed = false;  // true once Go has been issued (absorbing)
  double length = 0.0;
  double width = 0.0;
  Vec2 pos;
  Vec2 heading;
};

struct SimState {
  ScenarioId scenario = ScenarioId::Right;
  int step = 0;  // completed steps
  EgoState ego;
  std::vector<VehicleState> vehicles;
  int next_vehicle_id = 0;
  bool terminated = false;
};

struct StepEvents {
  bool collision = false;
  bool ego_reached_goal = false;
  bool timeout = false;
  int braking_vehicle_count = 0;

  bool terminal() const { return collision || ego_reached_goal || timeout; }
};

/// Reward earned by the step that produced these events.
inline double step_reward(const StepEvents& ev) {
  double r = kStepCost;
  if (ev.collision) r += kCollisionPenalty;
  if (ev.ego_reached_goal) r += kSuccessReward;
  return r;
}

/// Checks the ego's oriented rectangle against every traffic rectangle;
/// collision requires strictly positive overlap area. Also counts vehicles
/// currently braking. Goal/timeout flags are left false (the simulator fills
/// them with collision > goal > timeout priority).
StepEvents detect_collisions(const SimState& state);

/// Bernoulli-spawns one vehicle per lane at the lane start, at the speed
/// limit, unless another vehicle is within kSpawnClearance of the entry.
/// One uniform draw is consumed per lane regardless of outcome. Returns the
/// number of vehicles inserted.
int spawn_traffic(SimState& state, const RoadNetwork& net, const WorldConfig& world,
                  const SimConfig& cfg, Rng& rng);

// One episode of one scenario. Owns the state and two RNG streams (spawning
// and driving) derived from the config seed, so spawn patterns do not shift
// when driver noise draws change.
class Simulation {
 public:
  Simulation(const RoadNetwork& net, const WorldConfig& world, const SimConfig& cfg);
  /// Uses the default geometry catalog.
  Simulation(ScenarioId scenario, const SimConfig& cfg);

  const SimState& state() const { return state_; }
  const RoadNetwork& network() const { return *net_; }
  const WorldConfig& world() const { return *world_; }
  const SimConfig& config() const { return cfg_; }
  bool terminated() const { return state_.terminated; }

  /// Advances one step: spawn, traffic IDM+Krauss moves, ego move (Go is
  /// absorbing; Wait holds the ego at the stop line), event detection.
  /// Throws std::logic_error when the episode already terminated.
  StepEvents step(EgoCommand cmd);

  /// Digest of both RNG stream states, for purity checks.
  std::uint64_t rng_digest() const;

 private:
  // Where the ego route conflicts with one lane. Cars on the lane brake
  // toward block_s while the committed ego has not yet passed release_path_s;
  // a merge lane releases once the ego is aligned and followed as a leader.
  struct LaneClaim {
    bool applies = false;
    double block_s = 0.0;         // conflict point, lane arclength
    double release_path_s = 0.0;  // ego route arclength that clears the claim
  };

  void refresh_ego_pose();
  void build_lane_claims();
  // Spawn, move, and despawn traffic for one dt. The ego does not move.
  void advance_traffic();

  const RoadNetwork* net_;
  const WorldConfig* world_;
  SimConfig cfg_;
  SimState state_;
  std::vector<LaneClaim> claims_;
  Rng spawn_rng_;
  Rng drive_rng_;
};

enum class Outcome { Success = 0, Collision = 1, Timeout = 2 };

struct TrajectoryStep {
  SimState state;  // state the command was issued in
  EgoCommand command;
  double reward;
};

struct EpisodeRecord {
  Outcome outcome = Outcome::Timeout;
  int steps_taken = 0;
  double elapsed_time = 0.0;            // steps_taken * dt
  double total_other_brake_time = 0.0;  // sum over steps of braking cars * dt
  double total_reward = 0.0;
  std::vector<TrajectoryStep> trajectory;
};

using StepPolicy = std::function<EgoCommand(const SimState&)>;

/// Runs one full episode under a per-step policy. The seed argument replaces
/// cfg.rng_seed, so sweeps can share one config. Identical
/// (scenario, cfg, seed, policy) inputs reproduce the record bit for bit.
EpisodeRecord run_episode(const StepPolicy& policy, ScenarioId scenario,
                          const SimConfig& cfg, std::uint64_t seed);

}  // namespace crossway
