#include <cmath>

#include "crossway/geometry.hpp"
#include "doctest.h"

using namespace crossway;

TEST_CASE("polyline arclength addressing on an L shape") {
  Polyline line({{0, 0}, {10, 0}, {10, 5}});
  CHECK(line.length() == doctest::Approx(15.0));
  CHECK(line.point_at(0.0) == Vec2{0, 0});
  CHECK(line.point_at(10.0) == Vec2{10, 0});
  Vec2 p = line.point_at(12.0);
  CHECK(p.x == doctest::Approx(10.0));
  CHECK(p.y == doctest::Approx(2.0));
  // Clamping at the ends.
  CHECK(line.point_at(-3.0) == Vec2{0, 0});
  CHECK(line.point_at(99.0) == Vec2{10, 5});

  CHECK(line.tangent_at(5.0).x == doctest::Approx(1.0));
  CHECK(line.tangent_at(12.0).y == doctest::Approx(1.0));
}

TEST_CASE("polyline projection finds the closest station") {
  Polyline line({{0, 0}, {10, 0}});
  auto proj = line.project({3.0, 4.0});
  CHECK(proj.s == doctest::Approx(3.0));
  CHECK(proj.distance == doctest::Approx(4.0));
  proj = line.project({-5.0, 0.0});
  CHECK(proj.s == doctest::Approx(0.0));
  CHECK(proj.distance == doctest::Approx(5.0));
}

TEST_CASE("axis-aligned rectangle overlap") {
  OrientedRect a{{0, 0}, {1, 0}, 2.5, 1.0};
  OrientedRect b{{4.9, 0}, {1, 0}, 2.5, 1.0};
  CHECK(rects_overlap(a, b));
  b.center.x = 5.1;
  CHECK_FALSE(rects_overlap(a, b));
}

TEST_CASE("shared edge is not a collision") {
  OrientedRect a{{0, 0}, {1, 0}, 2.5, 1.0};
  OrientedRect b{{5.0, 0}, {1, 0}, 2.5, 1.0};  // faces touch exactly
  CHECK_FALSE(rects_overlap(a, b));
  OrientedRect c{{5.0, 2.0}, {1, 0}, 2.5, 1.0};  // corners touch exactly
  CHECK_FALSE(rects_overlap(a, c));
}

TEST_CASE("rotated rectangles need the full SAT") {
  const double s = std::sqrt(0.5);
  // Diamond centered between two axis-aligned boxes: overlaps one, not the
  // other.
  OrientedRect diamond{{3.0, 0}, {s, s}, 1.5, 1.5};
  OrientedRect left{{0, 0}, {1, 0}, 1.0, 1.0};
  OrientedRect right{{6.2, 0}, {1, 0}, 1.0, 1.0};
  CHECK(rects_overlap(diamond, left));
  CHECK_FALSE(rects_overlap(diamond, right));
  CHECK(rects_overlap(left, diamond));  // symmetry
}

TEST_CASE("containment counts as overlap") {
  OrientedRect outer{{0, 0}, {1, 0}, 10.0, 10.0};
  OrientedRect inner{{1, 1}, {0, 1}, 0.5, 0.25};
  CHECK(rects_overlap(outer, inner));
  CHECK(rects_overlap(inner, outer));
}

TEST_CASE("vec2 helpers") {
  Vec2 v{3, 4};
  CHECK(v.norm() == doctest::Approx(5.0));
  CHECK(v.normalized().norm() == doctest::Approx(1.0));
  CHECK(v.perp() == Vec2{-4, 3});
  CHECK(v.dot({1, 0}) == doctest::Approx(3.0));
  CHECK(v.cross({1, 0}) == doctest::Approx(-4.0));
}
