#include "crossway/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "crossway/flatkv.hpp"

namespace crossway {

namespace {

constexpr double kArcStepDegrees = 10.0;
// Sampling pitch used when classifying which lane bands the route touches.
constexpr double kBandSamplePitch = 0.1;

struct LaneSpec {
  double y = 0.0;
  bool eastbound = true;
};

LaneSpec parse_lane_token(const std::string& token, const std::string& where) {
  std::size_t colon = token.find(':');
  if (colon == std::string::npos) {
    throw std::runtime_error(where + ": lane entry '" + token +
                             "' must look like '<y>:east' or '<y>:west'");
  }
  LaneSpec spec;
  std::string y_text = trim(token.substr(0, colon));
  std::string dir = trim(token.substr(colon + 1));
  try {
    spec.y = std::stod(y_text);
  } catch (const std::exception&) {
    throw std::runtime_error(where + ": bad lane offset '" + y_text + "'");
  }
  if (dir == "east") {
    spec.eastbound = true;
  } else if (dir == "west") {
    spec.eastbound = false;
  } else {
    throw std::runtime_error(where + ": lane direction must be east or west, got '" +
                             dir + "'");
  }
  return spec;
}

// Sampled y-extent classification of the route against a lane band.
struct BandContact {
  bool entered = false;   // some route point lies inside the band
  bool below = false;     // some route point lies south of the band
  bool above = false;     // some route point lies north of the band
};

BandContact band_contact(const Polyline& path, double band_lo, double band_hi) {
  BandContact c;
  double len = path.length();
  for (double s = 0.0;; s += kBandSamplePitch) {
    bool last = s >= len;
    double y = path.point_at(last ? len : s).y;
    if (y < band_lo) c.below = true;
    else if (y > band_hi) c.above = true;
    else c.entered = true;
    if (last) break;
  }
  return c;
}

RoadNetwork build_network(ScenarioId id, const FlatKv& kv, const std::string& prefix,
                          const WorldConfig& world) {
  RoadNetwork net;
  net.id = id;

  for (std::size_t i = 0; const std::string& token :
                          split_list(kv.get(prefix + ".lanes"))) {
    LaneSpec spec = parse_lane_token(token, prefix + ".lanes");
    LaneGeometry lane;
    lane.id = static_cast<int>(i++);
    lane.width = world.lane_width;
    lane.speed_limit = world.speed_limit;
    if (spec.eastbound) {
      lane.centerline = Polyline({{world.lane_min_x, spec.y}, {world.lane_max_x, spec.y}});
      lane.travel_direction = {1.0, 0.0};
    } else {
      lane.centerline = Polyline({{world.lane_max_x, spec.y}, {world.lane_min_x, spec.y}});
      lane.travel_direction = {-1.0, 0.0};
    }
    net.lanes.push_back(std::move(lane));
  }
  if (net.lanes.empty()) {
    throw std::runtime_error(prefix + ".lanes: at least one lane required");
  }

  net.approach_x = kv.get_double(prefix + ".approach_x");
  double stop_y = kv.get_double(prefix + ".stop_y");
  std::string turn = kv.get(prefix + ".turn");

  std::vector<Vec2> pts;
  pts.push_back({net.approach_x, stop_y});
  if (turn == "none") {
    double goal_y = kv.get_double(prefix + ".goal_y");
    double end_y = kv.get_double(prefix + ".path_end_y");
    if (!(stop_y < goal_y && goal_y < end_y)) {
      throw std::runtime_error(prefix + ": need stop_y < goal_y < path_end_y");
    }
    pts.push_back({net.approach_x, end_y});
    net.goal_position = {net.approach_x, goal_y};
    net.merge_lane_id = -1;
  } else if (turn == "right" || turn == "left") {
    bool right = (turn == "right");
    double radius = kv.get_double(prefix + ".turn_radius");
    int merge = kv.get_int(prefix + ".merge_lane");
    double goal_x = kv.get_double(prefix + ".goal_x");
    double end_x = kv.get_double(prefix + ".path_end_x");
    if (radius <= 0.0) {
      throw std::runtime_error(prefix + ".turn_radius: must be positive");
    }
    if (merge < 0 || merge >= static_cast<int>(net.lanes.size())) {
      throw std::runtime_error(prefix + ".merge_lane: lane id out of range");
    }
    double merge_y = net.lanes[merge].centerline.points()[0].y;
    double arc_start_y = merge_y - radius;
    if (!(stop_y < arc_start_y)) {
      throw std::runtime_error(prefix + ": stop line must lie south of the turn arc");
    }
    // Quarter circle from heading north to heading east (right) or west
    // (left), sampled every few degrees.
    Vec2 center{net.approach_x + (right ? radius : -radius), arc_start_y};
    double deg_begin = right ? 180.0 : 0.0;
    double deg_end = 90.0;
    double step = right ? -kArcStepDegrees : kArcStepDegrees;
    for (double deg = deg_begin;; deg += step) {
      bool last = right ? (deg <= deg_end) : (deg >= deg_end);
      double rad = (last ? deg_end : deg) * std::numbers::pi / 180.0;
      pts.push_back({center.x + radius * std::cos(rad), center.y + radius * std::sin(rad)});
      if (last) break;
    }
    pts.push_back({end_x, merge_y});
    net.goal_position = {goal_x, merge_y};
    net.merge_lane_id = merge;
    bool goal_inward = right ? (goal_x > center.x && goal_x < end_x)
                             : (goal_x < center.x && goal_x > end_x);
    if (!goal_inward) {
      throw std::runtime_error(prefix + ": goal_x must lie between the turn exit and path_end_x");
    }
  } else {
    throw std::runtime_error(prefix + ".turn: expected none, left, or right, got '" +
                             turn + "'");
  }

  net.ego_path = Polyline(std::move(pts));
  net.stop_line_s = 0.0;
  Polyline::Projection goal_proj = net.ego_path.project(net.goal_position);
  if (goal_proj.distance > 1e-6) {
    throw std::runtime_error(prefix + ": goal point does not lie on the ego route");
  }
  net.goal_s = goal_proj.s;

  // The waiting ego must sit clear of every traffic lane's swept band.
  double ego_front_y = stop_y + world.vehicle_length / 2.0;
  for (const LaneGeometry& lane : net.lanes) {
    double lane_y = lane.centerline.points()[0].y;
    double traffic_edge = lane_y - world.vehicle_width / 2.0;
    if (ego_front_y >= traffic_edge) {
      throw std::runtime_error(prefix + ": waiting ego would reach into lane " +
                               std::to_string(lane.id));
    }
  }
  return net;
}

void check_contracts(const RoadNetwork& net) {
  std::string name = to_string(net.id);
  auto crossed = net.crossed_lane_ids();
  auto touched = net.intersected_lane_ids();
  if (touched.empty()) {
    throw std::runtime_error(name + ": ego route must reach at least one lane");
  }
  switch (net.id) {
    case ScenarioId::Right:
      if (!crossed.empty() || net.merge_lane_id < 0) {
        throw std::runtime_error(name + ": route must merge without crossing any lane");
      }
      break;
    case ScenarioId::Left:
      if (crossed.size() != 1 || net.merge_lane_id < 0) {
        throw std::runtime_error(name + ": route must cross exactly one lane, then merge");
      }
      break;
    case ScenarioId::Left2:
      if (crossed.size() != 2 || net.merge_lane_id < 0) {
        throw std::runtime_error(name + ": route must cross exactly two lanes, then merge");
      }
      break;
    case ScenarioId::Forward:
      if (crossed.size() != net.lanes.size()) {
        throw std::runtime_error(name + ": route must cross every lane");
      }
      break;
    case ScenarioId::Challenge:
      if (net.lanes.size() != 6 || crossed.size() != 6) {
        throw std::runtime_error(name + ": six lanes, all crossed, required");
      }
      break;
  }
}

}  // namespace

std::string to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::Right: return "right";
    case ScenarioId::Left: return "left";
    case ScenarioId::Left2: return "left2";
    case ScenarioId::Forward: return "forward";
    case ScenarioId::Challenge: return "challenge";
  }
  throw std::runtime_error("invalid scenario id");
}

ScenarioId scenario_from_string(const std::string& name) {
  for (ScenarioId id : kAllScenarios) {
    if (to_string(id) == name) return id;
  }
  throw std::runtime_error("unknown scenario '" + name +
                           "' (expected right, left, left2, forward, or challenge)");
}

std::vector<int> RoadNetwork::crossed_lane_ids() const {
  std::vector<int> out;
  for (const LaneGeometry& lane : lanes) {
    double y = lane.centerline.points()[0].y;
    BandContact c = band_contact(ego_path, y - lane.width / 2.0, y + lane.width / 2.0);
    if (c.below && c.above) out.push_back(lane.id);
  }
  return out;
}

std::vector<int> RoadNetwork::intersected_lane_ids() const {
  std::vector<int> out;
  for (const LaneGeometry& lane : lanes) {
    double y = lane.centerline.points()[0].y;
    BandContact c = band_contact(ego_path, y - lane.width / 2.0, y + lane.width / 2.0);
    if (c.entered || (c.below && c.above)) out.push_back(lane.id);
  }
  return out;
}

ScenarioCatalog parse_catalog(std::string_view text) {
  FlatKv kv = FlatKv::parse(text);
  ScenarioCatalog cat;

  WorldConfig& w = cat.world;
  w.lane_width = kv.get_double("road.lane_width");
  w.speed_limit = kv.get_double("road.speed_limit");
  w.lane_min_x = kv.get_double("road.min_x");
  w.lane_max_x = kv.get_double("road.max_x");
  w.vehicle_length = kv.get_double("vehicle.length");
  w.vehicle_width = kv.get_double("vehicle.width");
  w.grid.origin = {kv.get_double("grid.origin_x"), kv.get_double("grid.origin_y")};
  w.grid.cell_size = kv.get_double("grid.cell_size");
  if (w.lane_width <= 0.0 || w.speed_limit <= 0.0 || w.vehicle_length <= 0.0 ||
      w.vehicle_width <= 0.0 || w.grid.cell_size <= 0.0) {
    throw std::runtime_error("road/vehicle/grid dimensions must be positive");
  }
  if (w.lane_min_x >= w.lane_max_x) {
    throw std::runtime_error("road.min_x must be less than road.max_x");
  }

  for (ScenarioId id : kAllScenarios) {
    RoadNetwork net = build_network(id, kv, "scenario." + to_string(id), w);
    check_contracts(net);
    cat.networks[static_cast<int>(id)] = std::move(net);
  }

  std::vector<std::string> unread = kv.unread_keys();
  if (!unread.empty()) {
    throw std::runtime_error("unknown geometry key '" + unread.front() + "'");
  }
  return cat;
}

ScenarioCatalog load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open geometry file '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_catalog(buf.str());
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

const ScenarioCatalog& default_catalog() {
  static const ScenarioCatalog cat = parse_catalog(builtin_geometry_text());
  return cat;
}

const RoadNetwork& build_scenario(ScenarioId id) {
  return default_catalog().network(id);
}

}  // namespace crossway
