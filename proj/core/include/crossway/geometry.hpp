#pragma once

#include <cmath>
#include <vector>

namespace crossway {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double k) const { return {x * k, y * k}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::sqrt(x * x + y * y); }
  Vec2 normalized() const {
    double n = norm();
    return n > 0.0 ? Vec2{x / n, y / n} : Vec2{1.0, 0.0};
  }
  // 90-degree counter-clockwise rotation.
  Vec2 perp() const { return {-y, x}; }
};

inline bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

// Piecewise-linear curve addressed by arclength.
class Polyline {
 public:
  Polyline() = default;
  explicit Polyline(std::vector<Vec2> points);

  double length() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  const std::vector<Vec2>& points() const { return points_; }

  // Position at arclength s, clamped to [0, length].
  Vec2 point_at(double s) const;
  // Unit tangent of the segment containing s.
  Vec2 tangent_at(double s) const;

  struct Projection {
    double s = 0.0;         // arclength of the closest point
    double distance = 0.0;  // Euclidean distance to it
  };
  Projection project(Vec2 p) const;

 private:
  std::vector<Vec2> points_;
  std::vector<double> cumulative_;
};

// Axis-aligned raster frame: world point of the (0,0) cell corner plus the
// cell edge length. Orientation is fixed to the global axes.
struct GridFrame {
  Vec2 origin;
  double cell_size = 1.0;
};

// Oriented rectangle: center, unit long axis, half extents.
struct OrientedRect {
  Vec2 center;
  Vec2 axis;  // unit vector along the length
  double half_length = 0.0;
  double half_width = 0.0;
};

// True iff the rectangles overlap with strictly positive area. Rectangles
// that share only an edge or a corner do not count as overlapping.
bool rects_overlap(const OrientedRect& a, const OrientedRect& b);

}  // namespace crossway
