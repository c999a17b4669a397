#pragma once

#include <array>
#include <optional>

#include "crossway/geometry.hpp"
#include "crossway/sim.hpp"

namespace crossway {

inline constexpr int kGridRows = 18;
inline constexpr int kGridCols = 26;
inline constexpr int kGridChannels = 3;
inline constexpr int kGridCells = kGridRows * kGridCols * kGridChannels;

// Channel meanings within a grid cell.
inline constexpr int kChannelOccupancy = 0;
inline constexpr int kChannelSpeed = 1;
inline constexpr int kChannelEgo = 2;

// Divisor turning a speed into the [0, 1] cell value.
inline constexpr double kSpeedNormalization = 20.0;

// The network's input: a fixed 18x26x3 raster over the world frame,
// row-major with the channel as the fastest axis.
struct OccupancyGrid {
  std::array<double, kGridCells> data{};

  double& at(int row, int col, int channel) {
    return data[(row * kGridCols + col) * kGridChannels + channel];
  }
  double at(int row, int col, int channel) const {
    return data[(row * kGridCols + col) * kGridChannels + channel];
  }

  bool operator==(const OccupancyGrid&) const = default;
};

struct CellIndex {
  int row = 0;
  int col = 0;
  bool operator==(const CellIndex&) const = default;
};

/// Floor quantization of (p - origin) / cell_size; empty when the point falls
/// outside the 18x26 raster.
std::optional<CellIndex> world_to_cell(Vec2 p, const GridFrame& frame);

/// The raster frame shared by every scenario (from the default geometry).
const GridFrame& default_grid_frame();

/// Pure rasterization of a simulator state: channel 0 marks cells holding a
/// traffic car's center, channel 1 carries that car's normalized speed (max
/// when several cars share a cell), channel 2 marks the ego's cell.
/// Out-of-raster vehicles are omitted.
OccupancyGrid encode(const SimState& state, const GridFrame& frame);

}  // namespace crossway
