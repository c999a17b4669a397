#include "crossway/scenario.hpp"

namespace crossway {

namespace {

// Keep byte-identical to data/scenarios.txt (the test suite compares them).
constexpr char kGeometryText[] =
    R"(# Intersection geometry for the five crossing tasks.
#
# Units: meters and meters/second. The world frame is global: +x east,
# +y north, origin at the intersection center. Traffic runs east-west in
# straight lanes; the ego approaches from the south along x = approach_x,
# waits at y = stop_y, and either continues straight (turn = none) or follows
# a quarter-circle arc of turn_radius onto the merge lane.
#
# Lanes are listed south to north as centerline_y:direction pairs; the list
# index is the lane id. goal_* is the point on the ego route where the
# crossing counts as completed; path_end_* is where the route geometry stops.
#
# The same text is compiled into the library; loaders reject unknown keys.

road.lane_width = 3.2
road.speed_limit = 20
road.min_x = -60
road.max_x = 60

vehicle.length = 5
vehicle.width = 2

grid.origin_x = -65
grid.origin_y = -45
grid.cell_size = 5

scenario.right.lanes = -1.6:east, 1.6:west
scenario.right.approach_x = 6
scenario.right.stop_y = -6.7
scenario.right.turn = right
scenario.right.turn_radius = 4
scenario.right.merge_lane = 0
scenario.right.goal_x = 30
scenario.right.path_end_x = 40

scenario.left.lanes = -1.6:east, 1.6:west
scenario.left.approach_x = -6
scenario.left.stop_y = -6.7
scenario.left.turn = left
scenario.left.turn_radius = 6
scenario.left.merge_lane = 1
scenario.left.goal_x = -30
scenario.left.path_end_x = -40

scenario.left2.lanes = -4.8:east, -1.6:east, 1.6:west, 4.8:west
scenario.left2.approach_x = -12
scenario.left2.stop_y = -9.9
scenario.left2.turn = left
scenario.left2.turn_radius = 8
scenario.left2.merge_lane = 2
scenario.left2.goal_x = -34
scenario.left2.path_end_x = -44

scenario.forward.lanes = -1.6:east, 1.6:west
scenario.forward.approach_x = 0
scenario.forward.stop_y = -6.7
scenario.forward.turn = none
scenario.forward.goal_y = 8.2
scenario.forward.path_end_y = 20

scenario.challenge.lanes = -8:east, -4.8:east, -1.6:east, 1.6:west, 4.8:west, 8:west
scenario.challenge.approach_x = 0
scenario.challenge.stop_y = -13.1
scenario.challenge.turn = none
scenario.challenge.goal_y = 14.6
scenario.challenge.path_end_y = 25
)";

}  // namespace

std::string_view builtin_geometry_text() { return kGeometryText; }

}  // namespace crossway
