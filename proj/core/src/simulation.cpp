#include "crossway/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "crossway/hash.hpp"

namespace crossway {

namespace {

constexpr int kSpawnStream = 1;
constexpr int kDriveStream = 2;

OrientedRect vehicle_rect(Vec2 pos, Vec2 heading, double length, double width) {
  return OrientedRect{pos, heading, length / 2.0, width / 2.0};
}

}  // namespace

void SimConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw std::runtime_error("sim config: " + what);
  };
  if (!(dt > 0.0)) fail("dt must be positive");
  if (max_steps <= 0) fail("max_steps must be positive");
  if (!(depart_probability_per_second >= 0.0 && depart_probability_per_second <= 1.0))
    fail("depart_probability_per_second must be in [0, 1]");
  if (!(warmup_seconds >= 0.0)) fail("warmup_seconds must be non-negative");
  if (!(krauss_sigma >= 0.0 && krauss_sigma <= 1.0))
    fail("krauss_sigma must be in [0, 1]");
  if (!(idm.desired_speed > 0.0)) fail("idm desired_speed must be positive");
  if (!(idm.max_accel > 0.0)) fail("idm max_accel must be positive");
  if (!(idm.comfortable_decel > 0.0)) fail("idm comfortable_decel must be positive");
  if (!(idm.min_gap > 0.0)) fail("idm min_gap must be positive");
  if (!(idm.headway_time > 0.0)) fail("idm headway_time must be positive");
}

double SimConfig::per_step_spawn_probability() const {
  return 1.0 - std::pow(1.0 - depart_probability_per_second, dt);
}

StepEvents detect_collisions(const SimState& state) {
  StepEvents ev;
  OrientedRect ego = vehicle_rect(state.ego.pos, state.ego.heading,
                                  state.ego.length, state.ego.width);
  for (const VehicleState& v : state.vehicles) {
    if (v.accel < kBrakingAccelThreshold) ++ev.braking_vehicle_count;
    if (!ev.collision &&
        rects_overlap(ego, vehicle_rect(v.pos, v.heading, v.length, v.width))) {
      ev.collision = true;
    }
  }
  return ev;
}

int spawn_traffic(SimState& state, const RoadNetwork& net, const WorldConfig& world,
                  const SimConfig& cfg, Rng& rng) {
  double p = cfg.per_step_spawn_probability();
  int spawned = 0;
  for (const LaneGeometry& lane : net.lanes) {
    // Always draw, so the stream layout does not depend on lane occupancy.
    bool fire = rng.uniform() < p;
    if (!fire) continue;
    bool blocked = false;
    for (const VehicleState& v : state.vehicles) {
      if (v.lane_id == lane.id && v.position < kSpawnClearance) {
        blocked = true;
        break;
      }
    }
    if (blocked) continue;
    VehicleState v;
    v.id = state.next_vehicle_id++;
    v.lane_id = lane.id;
    v.position = 0.0;
    v.speed = lane.speed_limit;
    v.length = world.vehicle_length;
    v.width = world.vehicle_width;
    v.pos = lane.centerline.point_at(0.0);
    v.heading = lane.travel_direction;
    v.accel = 0.0;
    state.vehicles.push_back(v);
    ++spawned;
  }
  return spawned;
}

Simulation::Simulation(const RoadNetwork& net, const WorldConfig& world,
                       const SimConfig& cfg)
    : net_(&net),
      world_(&world),
      cfg_(cfg),
      spawn_rng_(derive_seed(cfg.rng_seed, kSpawnStream)),
      drive_rng_(derive_seed(cfg.rng_seed, kDriveStream)) {
  cfg_.validate();
  state_.scenario = net.id;
  state_.ego.path_s = net.stop_line_s;
  state_.ego.speed = 0.0;
  state_.ego.committed = false;
  state_.ego.length = world.vehicle_length;
  state_.ego.width = world.vehicle_width;
  build_lane_claims();
  refresh_ego_pose();
  // Pre-roll traffic so the first observation already shows a flowing road,
  // the way a trial inserted into a persistently running network would.
  int warmup_steps =
      static_cast<int>(std::lround(cfg_.warmup_seconds / cfg_.dt));
  for (int i = 0; i < warmup_steps; ++i) advance_traffic();
}

Simulation::Simulation(ScenarioId scenario, const SimConfig& cfg)
    : Simulation(build_scenario(scenario), default_catalog().world, cfg) {}

void Simulation::refresh_ego_pose() {
  state_.ego.pos = net_->ego_path.point_at(state_.ego.path_s);
  state_.ego.heading = net_->ego_path.tangent_at(state_.ego.path_s);
}

// Walks the ego route against every lane once. A lane is claimed from the
// moment the route first comes within conflict reach of its centerline until
// the ego either leaves that band again (a crossing) or starts driving the
// lane itself (a merge, handed over to the leader-following rule).
void Simulation::build_lane_claims() {
  constexpr double kWalkPitch = 0.1;
  const Polyline& route = net_->ego_path;
  double conflict_reach = (world_->vehicle_length + world_->vehicle_width) / 2.0;
  claims_.assign(net_->lanes.size(), LaneClaim{});
  for (const LaneGeometry& lane : net_->lanes) {
    LaneClaim& claim = claims_[lane.id];
    bool inside = false;
    double best_lateral = 0.0;
    for (double s = 0.0;; s += kWalkPitch) {
      bool last = s >= route.length();
      if (last) s = route.length();
      Vec2 p = route.point_at(s);
      Polyline::Projection proj = lane.centerline.project(p);
      if (!inside) {
        if (proj.distance <= conflict_reach) {
          inside = true;
          claim.applies = true;
          claim.block_s = proj.s;
          claim.release_path_s = route.length() + world_->vehicle_length;
          best_lateral = proj.distance;
        }
      } else {
        bool left_band = proj.distance > conflict_reach;
        bool driving_lane =
            route.tangent_at(s).dot(lane.travel_direction) >= kTrafficSeesEgoCos &&
            proj.distance <= kTrafficSeesEgoLateral;
        if (left_band || driving_lane) {
          claim.release_path_s = s;
          break;
        }
        if (proj.distance < best_lateral) {
          best_lateral = proj.distance;
          claim.block_s = proj.s;
        }
      }
      if (last) break;
    }
  }
}

void Simulation::advance_traffic() {
  double dt = cfg_.dt;

  spawn_traffic(state_, *net_, *world_, cfg_, spawn_rng_);

  // Traffic moves from a kinematic snapshot so update order cannot matter.
  struct Snap {
    double position;
    double speed;
  };
  std::vector<Snap> snap(state_.vehicles.size());
  for (std::size_t i = 0; i < state_.vehicles.size(); ++i) {
    snap[i] = {state_.vehicles[i].position, state_.vehicles[i].speed};
  }

  // Where the ego sits relative to each lane, for yielding decisions.
  struct EgoOnLane {
    double s = 0.0;            // ego center projected to lane arclength
    double speed_along = 0.0;  // ego speed component along lane travel
    bool aligned = false;      // ego drives this lane: follow it as a leader
  };
  std::vector<EgoOnLane> ego_on(net_->lanes.size());
  for (const LaneGeometry& lane : net_->lanes) {
    Polyline::Projection proj = lane.centerline.project(state_.ego.pos);
    double along = state_.ego.heading.dot(lane.travel_direction);
    EgoOnLane& e = ego_on[lane.id];
    e.s = proj.s;
    e.speed_along = std::max(0.0, along * state_.ego.speed);
    e.aligned = along >= kTrafficSeesEgoCos && proj.distance <= kTrafficSeesEgoLateral;
  }

  for (std::size_t i = 0; i < state_.vehicles.size(); ++i) {
    VehicleState& v = state_.vehicles[i];
    const LaneGeometry& lane = net_->lanes[v.lane_id];

    // Nearest same-lane vehicle ahead.
    double vehicle_gap = kFreeRoadGap;
    double vehicle_lead_speed = 0.0;
    for (std::size_t j = 0; j < state_.vehicles.size(); ++j) {
      if (j == i || state_.vehicles[j].lane_id != v.lane_id) continue;
      double ds = snap[j].position - snap[i].position;
      if (ds <= 0.0) continue;
      double gap = ds - (state_.vehicles[j].length + v.length) / 2.0;
      if (gap < vehicle_gap) {
        vehicle_gap = gap;
        vehicle_lead_speed = snap[j].speed;
      }
    }

    // An ego travelling along this lane is followed like any other leader.
    const EgoOnLane& eo = ego_on[v.lane_id];
    double gap = vehicle_gap;
    double lead_speed = vehicle_lead_speed;
    if (eo.aligned && eo.s > snap[i].position) {
      double ego_gap =
          eo.s - snap[i].position - (state_.ego.length + v.length) / 2.0;
      if (ego_gap < gap) {
        gap = ego_gap;
        lead_speed = eo.speed_along;
      }
    }

    double accel = idm_acceleration(v.speed, gap, lead_speed, cfg_.idm);

    // A committed ego claims the lane's crossing point until it has passed;
    // cars brake for the claim as hard as real brakes allow. Cars caught
    // inside their stopping distance when the claim appears still reach it.
    const LaneClaim& claim = claims_[v.lane_id];
    if (claim.applies && state_.ego.committed &&
        state_.ego.path_s < claim.release_path_s) {
      double block_gap =
          claim.block_s - snap[i].position - (v.length + state_.ego.width) / 2.0;
      double yield = std::max(idm_acceleration(v.speed, block_gap, 0.0, cfg_.idm),
                              -kYieldDecelLimit);
      accel = std::min(accel, yield);
    }
    double v_desired = v.speed + accel * dt;
    double v_new = krauss_speed_update(v.speed, v_desired, cfg_.krauss_sigma,
                                       cfg_.idm.max_accel, dt, drive_rng_);
    // Hard cap against the same-lane leader: never close more than the gap in
    // one step, which makes traffic-traffic collisions impossible.
    if (vehicle_gap < kFreeRoadGap) {
      v_new = std::min(v_new, std::max(0.0, vehicle_gap) / dt);
    }
    v.accel = (v_new - v.speed) / dt;
    v.speed = v_new;
    v.position += v_new * dt;
    v.pos = lane.centerline.point_at(v.position);
    v.heading = lane.travel_direction;
  }

  // Despawn vehicles whose center passed the end of their lane.
  std::erase_if(state_.vehicles, [this](const VehicleState& v) {
    return v.position > net_->lanes[v.lane_id].centerline.length();
  });
}

StepEvents Simulation::step(EgoCommand cmd) {
  if (state_.terminated) {
    throw std::logic_error("step() called on a terminated episode");
  }
  double dt = cfg_.dt;

  advance_traffic();

  // Ego: Go commits permanently; afterwards the route is driven by IDM
  // against any traffic blocking the corridor ahead.
  if (cmd == EgoCommand::Go) state_.ego.committed = true;
  if (state_.ego.committed) {
    double gap = kFreeRoadGap;
    double lead_speed = 0.0;
    Vec2 ego_tangent = net_->ego_path.tangent_at(state_.ego.path_s);
    for (const VehicleState& v : state_.vehicles) {
      Polyline::Projection proj = net_->ego_path.project(v.pos);
      if (proj.distance > kEgoCorridorHalfWidth) continue;
      if (proj.s <= state_.ego.path_s) continue;
      double g = proj.s - state_.ego.path_s - (v.length + state_.ego.length) / 2.0;
      if (g < gap) {
        gap = g;
        lead_speed = std::max(0.0, v.heading.dot(ego_tangent) * v.speed);
      }
    }
    double accel = idm_acceleration(state_.ego.speed, gap, lead_speed, cfg_.idm);
    double v_new = std::max(0.0, state_.ego.speed + accel * dt);
    state_.ego.speed = v_new;
    state_.ego.path_s += v_new * dt;
    refresh_ego_pose();
  }

  ++state_.step;

  StepEvents ev = detect_collisions(state_);
  if (!ev.collision) {
    if (state_.ego.path_s >= net_->goal_s) {
      ev.ego_reached_goal = true;
    } else if (state_.step >= cfg_.max_steps) {
      ev.timeout = true;
    }
  }
  if (ev.terminal()) state_.terminated = true;
  return ev;
}

std::uint64_t Simulation::rng_digest() const {
  return fnv1a64(to_hex(spawn_rng_.state_digest()) + to_hex(drive_rng_.state_digest()));
}

EpisodeRecord run_episode(const StepPolicy& policy, ScenarioId scenario,
                          const SimConfig& cfg, std::uint64_t seed) {
  SimConfig local = cfg;
  local.rng_seed = seed;
  Simulation sim(scenario, local);

  EpisodeRecord rec;
  StepEvents ev;
  while (true) {
    TrajectoryStep ts;
    ts.state = sim.state();
    ts.command = policy(sim.state());
    ev = sim.step(ts.command);
    ts.reward = step_reward(ev);
    rec.total_reward += ts.reward;
    rec.total_other_brake_time += ev.braking_vehicle_count * local.dt;
    rec.trajectory.push_back(std::move(ts));
    if (ev.terminal()) break;
  }
  rec.outcome = ev.collision ? Outcome::Collision
                             : (ev.ego_reached_goal ? Outcome::Success : Outcome::Timeout);
  rec.steps_taken = sim.state().step;
  rec.elapsed_time = rec.steps_taken * local.dt;
  return rec;
}

}  // namespace crossway
