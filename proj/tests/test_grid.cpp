#include <set>

#include "crossway/grid.hpp"
#include "crossway/scenario.hpp"
#include "doctest.h"

using namespace crossway;

namespace {

SimState state_with_vehicle(Vec2 pos, double speed) {
  SimState st;
  st.ego.pos = {1e6, 1e6};  // ego far outside the raster
  st.ego.heading = {1, 0};
  VehicleState v;
  v.pos = pos;
  v.speed = speed;
  v.heading = {1, 0};
  v.length = 5;
  v.width = 2;
  st.vehicles.push_back(v);
  return st;
}

}  // namespace

TEST_CASE("world_to_cell quantizes against the frame origin") {
  const GridFrame frame{{-65.0, -45.0}, 5.0};
  CHECK(world_to_cell({-65.0, -45.0}, frame) == CellIndex{0, 0});
  CHECK(world_to_cell({-65.0 + 25.5 * 5.0, -45.0 + 17.5 * 5.0}, frame) ==
        CellIndex{17, 25});
  CHECK(world_to_cell({-60.1, -41.0}, frame) == CellIndex{0, 0});
  CHECK(world_to_cell({-59.9, -39.9}, frame) == CellIndex{1, 1});
}

TEST_CASE("points outside the raster give no cell") {
  const GridFrame frame{{-65.0, -45.0}, 5.0};
  CHECK_FALSE(world_to_cell({-65.1, 0.0}, frame).has_value());
  CHECK_FALSE(world_to_cell({0.0, -45.1}, frame).has_value());
  CHECK_FALSE(world_to_cell({65.0, 0.0}, frame).has_value());  // col 26
  CHECK_FALSE(world_to_cell({0.0, 45.0}, frame).has_value());  // row 18
  CHECK(world_to_cell({64.9, 44.9}, frame) == CellIndex{17, 25});
}

TEST_CASE("encode rasterizes occupancy, speed, and the ego marker") {
  const GridFrame& frame = default_grid_frame();
  SimState st = state_with_vehicle({0.0, 1.6}, 10.0);
  st.ego.pos = {6.0, -6.7};
  const OccupancyGrid grid = encode(st, frame);

  const CellIndex vcell = *world_to_cell({0.0, 1.6}, frame);
  CHECK(grid.at(vcell.row, vcell.col, kChannelOccupancy) == 1.0);
  CHECK(grid.at(vcell.row, vcell.col, kChannelSpeed) == doctest::Approx(0.5));
  CHECK(grid.at(vcell.row, vcell.col, kChannelEgo) == 0.0);

  const CellIndex ecell = *world_to_cell({6.0, -6.7}, frame);
  CHECK(grid.at(ecell.row, ecell.col, kChannelEgo) == 1.0);
  CHECK(grid.at(ecell.row, ecell.col, kChannelOccupancy) == 0.0);

  int nonzero = 0;
  for (double v : grid.data) nonzero += v != 0.0;
  CHECK(nonzero == 3);
}

TEST_CASE("speed channel keeps the fastest car on cell conflicts") {
  const GridFrame& frame = default_grid_frame();
  SimState st = state_with_vehicle({0.0, 1.6}, 5.0);
  VehicleState v2 = st.vehicles[0];
  v2.pos = {0.5, 1.7};  // same cell
  v2.speed = 15.0;
  st.vehicles.push_back(v2);
  const OccupancyGrid grid = encode(st, frame);
  const CellIndex cell = *world_to_cell({0.0, 1.6}, frame);
  CHECK(grid.at(cell.row, cell.col, kChannelOccupancy) == 1.0);
  CHECK(grid.at(cell.row, cell.col, kChannelSpeed) == doctest::Approx(0.75));
}

TEST_CASE("speed values clamp into [0, 1]") {
  const GridFrame& frame = default_grid_frame();
  const OccupancyGrid grid = encode(state_with_vehicle({0.0, 1.6}, 35.0), frame);
  const CellIndex cell = *world_to_cell({0.0, 1.6}, frame);
  CHECK(grid.at(cell.row, cell.col, kChannelSpeed) == 1.0);
}

TEST_CASE("out-of-raster vehicles are omitted") {
  const GridFrame& frame = default_grid_frame();
  const OccupancyGrid grid = encode(state_with_vehicle({200.0, 0.0}, 10.0), frame);
  for (double v : grid.data) CHECK(v == 0.0);
}

TEST_CASE("encode is a pure function of the state") {
  SimConfig cfg;
  cfg.rng_seed = 31;
  Simulation sim(ScenarioId::Challenge, cfg);
  for (int i = 0; i < 12; ++i) sim.step(EgoCommand::Wait);
  const OccupancyGrid a = encode(sim.state(), default_grid_frame());
  const OccupancyGrid b = encode(sim.state(), default_grid_frame());
  CHECK(a == b);
}

TEST_CASE("the five waiting-ego marker cells are pairwise distinct") {
  std::set<std::pair<int, int>> cells;
  for (ScenarioId id : kAllScenarios) {
    SimConfig cfg;
    cfg.depart_probability_per_second = 0.0;
    Simulation sim(id, cfg);
    const OccupancyGrid grid = encode(sim.state(), default_grid_frame());
    int marked = 0;
    for (int r = 0; r < kGridRows; ++r) {
      for (int c = 0; c < kGridCols; ++c) {
        if (grid.at(r, c, kChannelEgo) == 1.0) {
          cells.insert({r, c});
          ++marked;
        }
      }
    }
    CHECK(marked == 1);
  }
  CHECK(cells.size() == 5);
}
