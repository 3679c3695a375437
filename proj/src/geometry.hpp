#pragma once

#include <compare>
#include <cstddef>
#include <vector>

#include "rational.hpp"

namespace pathloop {

struct Point {
  Rational x;
  Rational y;

  friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator<(const Point& a, const Point& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  }
};

struct Segment {
  Point a;
  Point b;
};

/// Closed half-plane {p : normal . p <= offset}.
struct HalfPlane {
  Rational nx;
  Rational ny;
  Rational offset;
};

struct Box {
  Rational min_x, min_y, max_x, max_y;
};

/// Convex region stored both as CCW vertices and as the intersection of the
/// closed half-planes bounding its edges.
///
/// Construction normalizes the input: consecutive duplicates and collinear
/// vertices are dropped and clockwise input is reversed. Anything that is not
/// a strictly convex polygon with at least three vertices afterwards is
/// rejected with Error{InvalidProblem}.
class ConvexPolygon {
 public:
  /// Empty placeholder; only assignment and comparison are meaningful.
  ConvexPolygon() = default;
  explicit ConvexPolygon(std::vector<Point> vertices);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<HalfPlane>& halfplanes() const { return halfplanes_; }
  const Box& bounds() const { return bounds_; }

  /// Vertex average snapped to the decimal grid. Always inside the polygon.
  Point center() const;

  friend bool operator==(const ConvexPolygon& a, const ConvexPolygon& b) {
    return a.vertices_ == b.vertices_;
  }

 private:
  std::vector<Point> vertices_;
  std::vector<HalfPlane> halfplanes_;
  Box bounds_;
};

ConvexPolygon make_rectangle(const Rational& min_x, const Rational& min_y,
                             const Rational& max_x, const Rational& max_y);

/// Closed containment: boundary points are inside.
bool contains(const ConvexPolygon& poly, const Point& p);

/// True iff some point a + t(b - a), t in [0, 1], lies in the closed polygon.
/// Decided exactly by intersecting the per-half-plane intervals of t.
bool segment_intersects(const Segment& seg, const ConvexPolygon& poly);

/// Closed-set intersection test for two convex polygons.
bool polygons_intersect(const ConvexPolygon& a, const ConvexPolygon& b);

/// Convex hull (monotone chain). Throws Error{InvalidArgument} when the points
/// are all collinear.
ConvexPolygon convex_hull(std::vector<Point> points);

Rational squared_distance(const Point& p, const Segment& seg);

/// Zero when p is inside the polygon.
Rational squared_distance(const Point& p, const ConvexPolygon& poly);

/// Squared distance between a segment and a convex polygon; zero on contact.
Rational squared_distance(const Segment& seg, const ConvexPolygon& poly);

/// Closed vertical extent [lo, hi] of the polygon on the line X = x, if any.
bool vertical_section(const ConvexPolygon& poly, const Rational& x, Rational& lo, Rational& hi);

/// Length of the workspace diagonal times `fraction`, snapped to the grid.
Rational clearance_from_fraction(const ConvexPolygon& workspace, const Rational& fraction);

inline const Rational& default_clearance_fraction() {
  static const Rational value(1, 1000);
  return value;
}

using Path = std::vector<Point>;

/// Number of segments: waypoint count minus one.
std::size_t path_length(const Path& path);

}  // namespace pathloop
