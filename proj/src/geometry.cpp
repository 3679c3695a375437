#include "geometry.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace pathloop {

namespace {

Rational cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

[[noreturn]] void invalid(const std::string& why) {
  throw Error(ErrorCode::InvalidProblem, "invalid polygon: " + why);
}

}  // namespace

ConvexPolygon::ConvexPolygon(std::vector<Point> vertices) {
  std::vector<Point> pts;
  pts.reserve(vertices.size());
  for (auto& v : vertices) {
    if (pts.empty() || !(pts.back() == v)) pts.push_back(std::move(v));
  }
  while (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
  if (pts.size() < 3) invalid("fewer than 3 distinct vertices");

  Rational twice_area = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point& p = pts[i];
    const Point& q = pts[(i + 1) % pts.size()];
    twice_area += p.x * q.y - q.x * p.y;
  }
  if (twice_area == 0) invalid("zero area");
  if (twice_area < 0) std::reverse(pts.begin(), pts.end());

  // Drop collinear vertices until every turn is strict.
  bool changed = true;
  while (changed && pts.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Point& prev = pts[(i + pts.size() - 1) % pts.size()];
      const Point& next = pts[(i + 1) % pts.size()];
      if (cross(prev, pts[i], next) == 0) {
        pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  if (pts.size() < 3) invalid("degenerate after collinear elimination");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point& prev = pts[(i + pts.size() - 1) % pts.size()];
    const Point& next = pts[(i + 1) % pts.size()];
    if (cross(prev, pts[i], next) < 0) invalid("not convex");
  }

  halfplanes_.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point& p = pts[i];
    const Point& q = pts[(i + 1) % pts.size()];
    HalfPlane h{q.y - p.y, p.x - q.x, 0};
    h.offset = h.nx * p.x + h.ny * p.y;
    halfplanes_.push_back(std::move(h));
  }
  vertices_ = std::move(pts);

  // All left turns can still wind more than once; a simple convex polygon
  // has every vertex inside every edge half-plane.
  for (const auto& v : vertices_) {
    for (const auto& h : halfplanes_) {
      if (h.nx * v.x + h.ny * v.y > h.offset) invalid("self-intersecting");
    }
  }

  bounds_ = {vertices_[0].x, vertices_[0].y, vertices_[0].x, vertices_[0].y};
  for (const auto& v : vertices_) {
    if (v.x < bounds_.min_x) bounds_.min_x = v.x;
    if (v.y < bounds_.min_y) bounds_.min_y = v.y;
    if (v.x > bounds_.max_x) bounds_.max_x = v.x;
    if (v.y > bounds_.max_y) bounds_.max_y = v.y;
  }
}

Point ConvexPolygon::center() const {
  Rational sx = 0;
  Rational sy = 0;
  for (const auto& v : vertices_) {
    sx += v.x;
    sy += v.y;
  }
  const Rational n(static_cast<long>(vertices_.size()));
  Point c{round_to_digits(sx / n), round_to_digits(sy / n)};
  if (contains(*this, c)) return c;
  return vertices_.front();
}

ConvexPolygon make_rectangle(const Rational& min_x, const Rational& min_y,
                             const Rational& max_x, const Rational& max_y) {
  return ConvexPolygon({{min_x, min_y}, {max_x, min_y}, {max_x, max_y}, {min_x, max_y}});
}

bool contains(const ConvexPolygon& poly, const Point& p) {
  for (const auto& h : poly.halfplanes()) {
    if (h.nx * p.x + h.ny * p.y > h.offset) return false;
  }
  return true;
}

bool segment_intersects(const Segment& seg, const ConvexPolygon& poly) {
  const Box& box = poly.bounds();
  if ((seg.a.x < box.min_x && seg.b.x < box.min_x) || (seg.a.x > box.max_x && seg.b.x > box.max_x) ||
      (seg.a.y < box.min_y && seg.b.y < box.min_y) || (seg.a.y > box.max_y && seg.b.y > box.max_y)) {
    return false;
  }
  const Rational dx = seg.b.x - seg.a.x;
  const Rational dy = seg.b.y - seg.a.y;
  Rational lo = 0;
  Rational hi = 1;
  for (const auto& h : poly.halfplanes()) {
    // h.n . (a + t d) <= offset  <=>  t * (n . d) <= offset - n . a
    const Rational slope = h.nx * dx + h.ny * dy;
    const Rational slack = h.offset - (h.nx * seg.a.x + h.ny * seg.a.y);
    if (slope == 0) {
      if (slack < 0) return false;
      continue;
    }
    const Rational bound = slack / slope;
    if (slope > 0) {
      if (bound < hi) hi = bound;
    } else {
      if (bound > lo) lo = bound;
    }
    if (lo > hi) return false;
  }
  return lo <= hi;
}

bool polygons_intersect(const ConvexPolygon& a, const ConvexPolygon& b) {
  const auto& va = a.vertices();
  for (std::size_t i = 0; i < va.size(); ++i) {
    if (segment_intersects({va[i], va[(i + 1) % va.size()]}, b)) return true;
  }
  return std::any_of(b.vertices().begin(), b.vertices().end(),
                     [&](const Point& v) { return contains(a, v); });
}

ConvexPolygon convex_hull(std::vector<Point> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) throw Error(ErrorCode::InvalidArgument, "hull needs 3 distinct points");
  std::vector<Point> hull(2 * points.size());
  std::size_t k = 0;
  for (const auto& p : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw Error(ErrorCode::InvalidArgument, "points are collinear");
  return ConvexPolygon(std::move(hull));
}

Rational squared_distance(const Point& p, const Segment& seg) {
  const Rational dx = seg.b.x - seg.a.x;
  const Rational dy = seg.b.y - seg.a.y;
  const Rational len2 = dx * dx + dy * dy;
  Rational t = 0;
  if (len2 != 0) {
    t = ((p.x - seg.a.x) * dx + (p.y - seg.a.y) * dy) / len2;
    if (t < 0) t = 0;
    if (t > 1) t = 1;
  }
  const Rational ex = seg.a.x + t * dx - p.x;
  const Rational ey = seg.a.y + t * dy - p.y;
  return ex * ex + ey * ey;
}

Rational squared_distance(const Point& p, const ConvexPolygon& poly) {
  if (contains(poly, p)) return 0;
  const auto& v = poly.vertices();
  Rational best = squared_distance(p, Segment{v[0], v[1]});
  for (std::size_t i = 1; i < v.size(); ++i) {
    Rational d = squared_distance(p, Segment{v[i], v[(i + 1) % v.size()]});
    if (d < best) best = std::move(d);
  }
  return best;
}

Rational squared_distance(const Segment& seg, const ConvexPolygon& poly) {
  if (segment_intersects(seg, poly)) return 0;
  Rational best = squared_distance(seg.a, poly);
  Rational d = squared_distance(seg.b, poly);
  if (d < best) best = d;
  for (const auto& v : poly.vertices()) {
    d = squared_distance(v, seg);
    if (d < best) best = d;
  }
  return best;
}

bool vertical_section(const ConvexPolygon& poly, const Rational& x, Rational& lo, Rational& hi) {
  const Box& box = poly.bounds();
  if (x < box.min_x || x > box.max_x) return false;
  bool found = false;
  const auto& v = poly.vertices();
  auto take = [&](const Rational& y) {
    if (!found) {
      lo = y;
      hi = y;
      found = true;
    } else {
      if (y < lo) lo = y;
      if (y > hi) hi = y;
    }
  };
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& p = v[i];
    const Point& q = v[(i + 1) % v.size()];
    if (p.x == x) take(p.y);
    if (q.x == x) take(q.y);
    if (p.x != q.x && ((p.x < x && q.x > x) || (p.x > x && q.x < x))) {
      take(p.y + (q.y - p.y) * (x - p.x) / (q.x - p.x));
    }
  }
  return found;
}

Rational clearance_from_fraction(const ConvexPolygon& workspace, const Rational& fraction) {
  const Box& b = workspace.bounds();
  const double w = to_double(b.max_x - b.min_x);
  const double h = to_double(b.max_y - b.min_y);
  const Rational diagonal = from_double(std::sqrt(w * w + h * h));
  return round_to_digits(diagonal * fraction);
}

std::size_t path_length(const Path& path) {
  if (path.empty()) throw Error(ErrorCode::EmptyPath, "path has no waypoints");
  return path.size() - 1;
}

}  // namespace pathloop
