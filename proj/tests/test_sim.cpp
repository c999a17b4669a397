#include <cmath>
#include <vector>

#include "crossway/hash.hpp"
#include "crossway/sim.hpp"
#include "doctest.h"

using namespace crossway;

namespace {

// Independent 1-D reimplementation of the committed ego on an empty road:
// IDM with no leader, explicit Euler, position advanced by the new speed.
int free_road_steps_to_goal(const RoadNetwork& net, const IdmParams& idm,
                            double dt) {
  double v = 0.0;
  double s = net.stop_line_s;
  int steps = 0;
  while (s < net.goal_s) {
    const double a =
        idm.max_accel * (1.0 - std::pow(v / idm.desired_speed, 4.0));
    v = std::max(0.0, v + a * dt);
    s += v * dt;
    ++steps;
    REQUIRE(steps < 1000);
  }
  return steps;
}

std::uint64_t state_digest(const SimState& st) {
  std::vector<double> values{static_cast<double>(st.step), st.ego.path_s,
                             st.ego.speed, st.ego.pos.x, st.ego.pos.y};
  for (const VehicleState& v : st.vehicles) {
    values.insert(values.end(),
                  {static_cast<double>(v.id), static_cast<double>(v.lane_id),
                   v.position, v.speed, v.accel, v.pos.x, v.pos.y});
  }
  return fnv1a64(values);
}

}  // namespace

TEST_CASE("waiting out the clock times out at 20 seconds with reward -1") {
  for (ScenarioId id : kAllScenarios) {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      SimConfig cfg;
      EpisodeRecord rec = run_episode([](const SimState&) { return EgoCommand::Wait; },
                                      id, cfg, seed);
      CHECK(rec.outcome == Outcome::Timeout);
      CHECK(rec.steps_taken == 100);
      CHECK(rec.elapsed_time == doctest::Approx(20.0));
      CHECK(rec.total_reward == doctest::Approx(-1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("the waiting ego is never hit") {
  // Full default traffic, long exposure, every scenario: the stop line is
  // placed outside every lane's swept band.
  for (ScenarioId id : kAllScenarios) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      EpisodeRecord rec = run_episode([](const SimState&) { return EgoCommand::Wait; },
                                      id, SimConfig{}, derive_seed(404, seed));
      CHECK(rec.outcome == Outcome::Timeout);
    }
  }
}

TEST_CASE("empty-road crossing matches the 1-D kinematics oracle") {
  SimConfig cfg;
  cfg.depart_probability_per_second = 0.0;
  for (ScenarioId id : kAllScenarios) {
    CAPTURE(to_string(id));
    const RoadNetwork& net = build_scenario(id);
    const int expected = free_road_steps_to_goal(net, cfg.idm, cfg.dt);
    EpisodeRecord rec = run_episode([](const SimState&) { return EgoCommand::Go; },
                                    id, cfg, 5);
    CHECK(rec.outcome == Outcome::Success);
    CHECK(rec.steps_taken == expected);
    CHECK(rec.total_reward ==
          doctest::Approx(1.0 - 0.01 * expected).epsilon(1e-12));
    CHECK(rec.total_other_brake_time == 0.0);
  }
}

TEST_CASE("episodes are deterministic under a fixed seed") {
  for (ScenarioId id : {ScenarioId::Left, ScenarioId::Challenge}) {
    auto policy = [](const SimState& st) {
      return st.step >= 10 ? EgoCommand::Go : EgoCommand::Wait;
    };
    EpisodeRecord a = run_episode(policy, id, SimConfig{}, 77);
    EpisodeRecord b = run_episode(policy, id, SimConfig{}, 77);
    REQUIRE(a.trajectory.size() == b.trajectory.size());
    for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
      CHECK(state_digest(a.trajectory[i].state) ==
            state_digest(b.trajectory[i].state));
      CHECK(a.trajectory[i].reward == b.trajectory[i].reward);
    }
    EpisodeRecord c = run_episode(policy, id, SimConfig{}, 78);
    bool differs = c.trajectory.size() != a.trajectory.size();
    for (std::size_t i = 0; !differs && i < a.trajectory.size(); ++i) {
      differs = state_digest(a.trajectory[i].state) !=
                state_digest(c.trajectory[i].state);
    }
    CHECK(differs);
  }
}

TEST_CASE("spawn frequency matches the per-step departure probability") {
  const RoadNetwork& net = build_scenario(ScenarioId::Forward);  // two lanes
  const WorldConfig& world = default_catalog().world;
  SimConfig cfg;
  const double p = cfg.per_step_spawn_probability();
  CHECK(p == doctest::Approx(1.0 - std::pow(0.8, 0.2)).epsilon(1e-12));

  Rng rng(99);
  int spawns = 0;
  const int kTrials = 10000;
  for (int i = 0; i < kTrials; ++i) {
    SimState st;  // fresh empty road, so clearance never blocks
    spawns += spawn_traffic(st, net, world, cfg, rng);
  }
  const double freq = spawns / static_cast<double>(2 * kTrials);
  // 3.5 sigma of a Bernoulli(p) mean over 20,000 trials is under 0.005.
  CHECK(freq == doctest::Approx(p).epsilon(0.12));
  CHECK(std::abs(freq - p) < 0.005);
}

TEST_CASE("spawns hold back while the entry is occupied") {
  const RoadNetwork& net = build_scenario(ScenarioId::Forward);
  const WorldConfig& world = default_catalog().world;
  SimConfig cfg;
  cfg.depart_probability_per_second = 1.0;  // p_step = 1: fires every lane
  Rng rng(1);
  SimState st;
  CHECK(spawn_traffic(st, net, world, cfg, rng) == 2);
  CHECK(spawn_traffic(st, net, world, cfg, rng) == 0);  // entries blocked
  st.vehicles[0].position = kSpawnClearance + 0.1;
  CHECK(spawn_traffic(st, net, world, cfg, rng) == 1);  // one lane freed
}

TEST_CASE("10k-step fuzz: speed bounds, exclusive events, no traffic pileups") {
  for (ScenarioId id : kAllScenarios) {
    CAPTURE(to_string(id));
    SimConfig cfg;
    cfg.krauss_sigma = 0.0;
    const double speed_cap = cfg.idm.desired_speed + cfg.idm.max_accel * cfg.dt;

    int total_steps = 0;
    std::uint64_t episode = 0;
    while (total_steps < 10000) {
      SimConfig ep_cfg = cfg;
      ep_cfg.rng_seed = derive_seed(555 + static_cast<int>(id), episode);
      Simulation sim(id, ep_cfg);
      Rng policy_rng(derive_seed(777, episode));
      ++episode;
      while (!sim.terminated() && total_steps < 10000) {
        const EgoCommand cmd =
            policy_rng.uniform() < 0.02 ? EgoCommand::Go : EgoCommand::Wait;
        const StepEvents ev = sim.step(cmd);
        ++total_steps;

        const int terminal_flags =
            int(ev.collision) + int(ev.ego_reached_goal) + int(ev.timeout);
        REQUIRE(terminal_flags <= 1);

        const auto& vehicles = sim.state().vehicles;
        for (const VehicleState& v : vehicles) {
          REQUIRE(v.speed >= 0.0);
          REQUIRE(v.speed <= speed_cap + 1e-9);
        }
        for (std::size_t i = 0; i < vehicles.size(); ++i) {
          for (std::size_t j = i + 1; j < vehicles.size(); ++j) {
            const OrientedRect a{vehicles[i].pos, vehicles[i].heading,
                                 vehicles[i].length / 2, vehicles[i].width / 2};
            const OrientedRect b{vehicles[j].pos, vehicles[j].heading,
                                 vehicles[j].length / 2, vehicles[j].width / 2};
            REQUIRE_FALSE(rects_overlap(a, b));
          }
        }
      }
    }
  }
}

TEST_CASE("same seed, same commands: bitwise-equal evolution") {
  SimConfig cfg;
  cfg.rng_seed = 4242;
  Simulation a(ScenarioId::Challenge, cfg);
  Simulation b(ScenarioId::Challenge, cfg);
  for (int i = 0; i < 100 && !a.terminated(); ++i) {
    const EgoCommand cmd = i >= 40 ? EgoCommand::Go : EgoCommand::Wait;
    a.step(cmd);
    b.step(cmd);
    REQUIRE(state_digest(a.state()) == state_digest(b.state()));
  }
}

TEST_CASE("stepping a terminated episode throws") {
  SimConfig cfg;
  cfg.max_steps = 3;
  Simulation sim(ScenarioId::Right, cfg);
  while (!sim.terminated()) sim.step(EgoCommand::Wait);
  CHECK_THROWS_AS(sim.step(EgoCommand::Wait), std::logic_error);
}

TEST_CASE("detect_collisions wants strictly positive overlap") {
  SimState st;
  st.ego.pos = {0, 0};
  st.ego.heading = {1, 0};
  st.ego.length = 5;
  st.ego.width = 2;
  VehicleState v;
  v.length = 5;
  v.width = 2;
  v.heading = {1, 0};
  v.pos = {5.0, 0.0};  // bumper to bumper exactly
  st.vehicles.push_back(v);
  CHECK_FALSE(detect_collisions(st).collision);
  st.vehicles[0].pos.x = 4.999;
  CHECK(detect_collisions(st).collision);
}

TEST_CASE("braking counter uses the -0.5 threshold") {
  SimState st;
  st.ego.pos = {1000, 1000};  // far away
  st.ego.heading = {1, 0};
  st.ego.length = 5;
  st.ego.width = 2;
  VehicleState v;
  v.pos = {0, 0};
  v.heading = {1, 0};
  v.length = 5;
  v.width = 2;
  v.accel = -0.49;
  st.vehicles.push_back(v);
  v.accel = -0.51;
  st.vehicles.push_back(v);
  v.pos = {20, 0};
  v.accel = -3.0;
  st.vehicles.push_back(v);
  CHECK(detect_collisions(st).braking_vehicle_count == 2);
}

TEST_CASE("config validation names the bad field") {
  SimConfig cfg;
  cfg.dt = 0.0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("dt"),
                       std::runtime_error);
  cfg = SimConfig{};
  cfg.depart_probability_per_second = 1.5;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("depart"),
                       std::runtime_error);
  cfg = SimConfig{};
  cfg.krauss_sigma = -0.1;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("sigma"),
                       std::runtime_error);
}
