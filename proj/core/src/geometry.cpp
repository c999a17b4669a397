#include "crossway/geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>

namespace crossway {

Polyline::Polyline(std::vector<Vec2> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw std::invalid_argument("Polyline needs at least two points");
  }
  cumulative_.resize(points_.size());
  cumulative_[0] = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    cumulative_[i] = cumulative_[i - 1] + (points_[i] - points_[i - 1]).norm();
  }
}

Vec2 Polyline::point_at(double s) const {
  if (s <= 0.0) return points_.front();
  if (s >= length()) return points_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
  double seg = cumulative_[i] - cumulative_[i - 1];
  double t = seg > 0.0 ? (s - cumulative_[i - 1]) / seg : 0.0;
  return points_[i - 1] + (points_[i] - points_[i - 1]) * t;
}

Vec2 Polyline::tangent_at(double s) const {
  std::size_t i = 1;
  if (s >= length()) {
    i = points_.size() - 1;
  } else if (s > 0.0) {
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    i = static_cast<std::size_t>(it - cumulative_.begin());
  }
  return (points_[i] - points_[i - 1]).normalized();
}

Polyline::Projection Polyline::project(Vec2 p) const {
  Projection best{0.0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 1; i < points_.size(); ++i) {
    Vec2 a = points_[i - 1];
    Vec2 d = points_[i] - a;
    double len2 = d.dot(d);
    double t = len2 > 0.0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
    Vec2 q = a + d * t;
    double dist = (p - q).norm();
    if (dist < best.distance) {
      best.distance = dist;
      best.s = cumulative_[i - 1] + std::sqrt(len2) * t;
    }
  }
  return best;
}

namespace {

std::array<Vec2, 4> corners(const OrientedRect& r) {
  Vec2 u = r.axis * r.half_length;
  Vec2 v = r.axis.perp() * r.half_width;
  return {r.center + u + v, r.center + u - v, r.center - u + v,
          r.center - u - v};
}

// Projection interval of a rectangle onto a unit axis.
std::pair<double, double> project_onto(const std::array<Vec2, 4>& pts,
                                       Vec2 axis) {
  double lo = pts[0].dot(axis);
  double hi = lo;
  for (std::size_t i = 1; i < 4; ++i) {
    double v = pts[i].dot(axis);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

}  // namespace

bool rects_overlap(const OrientedRect& a, const OrientedRect& b) {
  const std::array<Vec2, 4> axes = {a.axis, a.axis.perp(), b.axis,
                                    b.axis.perp()};
  const std::array<Vec2, 4> ca = corners(a);
  const std::array<Vec2, 4> cb = corners(b);
  for (Vec2 axis : axes) {
    auto [alo, ahi] = project_onto(ca, axis);
    auto [blo, bhi] = project_onto(cb, axis);
    // Separating axis, or mere touching: no positive-area overlap.
    if (std::max(alo, blo) >= std::min(ahi, bhi)) return false;
  }
  return true;
}

}  // namespace crossway
