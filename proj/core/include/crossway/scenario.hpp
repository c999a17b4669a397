#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "crossway/geometry.hpp"

namespace crossway {

// The five intersection crossing tasks. Values double as array indices.
enum class ScenarioId { Right = 0, Left = 1, Left2 = 2, Forward = 3, Challenge = 4 };

inline constexpr std::array<ScenarioId, 5> kAllScenarios = {
    ScenarioId::Right, ScenarioId::Left, ScenarioId::Left2, ScenarioId::Forward,
    ScenarioId::Challenge};

inline constexpr int kScenarioCount = 5;

std::string to_string(ScenarioId id);
/// Throws std::runtime_error on an unrecognized name.
ScenarioId scenario_from_string(const std::string& name);

// One straight traffic lane. Traffic flows from arclength 0 toward
// centerline.length() regardless of compass direction.
struct LaneGeometry {
  int id = 0;
  Polyline centerline;
  double width = 0.0;           // meters
  double speed_limit = 0.0;     // m/s
  Vec2 travel_direction;        // unit vector
};

// Fixed geometry for one task: the traffic lanes, the ego's route through the
// intersection, and the stop/goal stations along that route.
struct RoadNetwork {
  ScenarioId id = ScenarioId::Right;
  std::vector<LaneGeometry> lanes;
  Polyline ego_path;
  double stop_line_s = 0.0;  // arclength where the ego holds while waiting
  double goal_s = 0.0;       // arclength past which the crossing succeeded
  Vec2 goal_position;
  int merge_lane_id = -1;    // lane the route ends on, or -1 for none
  double approach_x = 0.0;   // x of the south approach leg

  // Lanes whose full band the route passes through (enters from one side and
  // leaves on the other). The merge lane, which the route ends on, is not
  // crossed.
  std::vector<int> crossed_lane_ids() const;
  // Lanes whose band the route enters at all (crossed or merged onto).
  std::vector<int> intersected_lane_ids() const;
};

// Constants shared by every scenario, parsed from the geometry text.
struct WorldConfig {
  double lane_width = 0.0;      // meters
  double speed_limit = 0.0;     // m/s
  double lane_min_x = 0.0;      // west end of every lane
  double lane_max_x = 0.0;      // east end of every lane
  double vehicle_length = 0.0;  // meters, traffic and ego alike
  double vehicle_width = 0.0;   // meters
  GridFrame grid;               // frame of the observation raster
};

struct ScenarioCatalog {
  WorldConfig world;
  std::array<RoadNetwork, kScenarioCount> networks;

  const RoadNetwork& network(ScenarioId id) const {
    return networks[static_cast<int>(id)];
  }
};

/// The geometry description compiled into the library. `data/scenarios.txt`
/// holds the identical text for reference and external tooling.
std::string_view builtin_geometry_text();

/// Parses a geometry description. Throws std::runtime_error on malformed
/// text, missing keys, unknown keys, or geometry that violates the scenario
/// contracts (lane counts, crossing counts, stop line placement).
ScenarioCatalog parse_catalog(std::string_view text);
ScenarioCatalog load_catalog(const std::filesystem::path& path);

/// Catalog parsed from builtin_geometry_text(), built once and cached.
const ScenarioCatalog& default_catalog();

/// Fixed geometry for one task, from the default catalog. Idempotent.
const RoadNetwork& build_scenario(ScenarioId id);

}  // namespace crossway
