#include "crossway/grid.hpp"

#include <algorithm>
#include <cmath>

namespace crossway {

std::optional<CellIndex> world_to_cell(Vec2 p, const GridFrame& frame) {
  double col = std::floor((p.x - frame.origin.x) / frame.cell_size);
  double row = std::floor((p.y - frame.origin.y) / frame.cell_size);
  if (row < 0.0 || row >= kGridRows || col < 0.0 || col >= kGridCols) {
    return std::nullopt;
  }
  return CellIndex{static_cast<int>(row), static_cast<int>(col)};
}

const GridFrame& default_grid_frame() { return default_catalog().world.grid; }

OccupancyGrid encode(const SimState& state, const GridFrame& frame) {
  OccupancyGrid grid;
  for (const VehicleState& v : state.vehicles) {
    std::optional<CellIndex> cell = world_to_cell(v.pos, frame);
    if (!cell) continue;
    grid.at(cell->row, cell->col, kChannelOccupancy) = 1.0;
    double speed = std::clamp(v.speed / kSpeedNormalization, 0.0, 1.0);
    double& slot = grid.at(cell->row, cell->col, kChannelSpeed);
    slot = std::max(slot, speed);
  }
  if (std::optional<CellIndex> cell = world_to_cell(state.ego.pos, frame)) {
    grid.at(cell->row, cell->col, kChannelEgo) = 1.0;
  }
  return grid;
}

}  // namespace crossway
