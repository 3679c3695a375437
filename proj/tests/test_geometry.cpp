#include <doctest.h>

#include "helpers.hpp"
#include "support/oracles.hpp"
#include "verify.hpp"

using namespace testing;

namespace {

const ConvexPolygon& unit_square() {
  static const ConvexPolygon p({pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)});
  return p;
}

const ConvexPolygon& block() {
  static const ConvexPolygon p({pt(2, 2), pt(4, 2), pt(4, 4), pt(2, 4)});
  return p;
}

ConvexPolygon random_polygon(Engine& e) {
  for (;;) {
    std::vector<Point> pts;
    const Point c = random_point(e, 1, 9);
    for (int i = 0; i < 5; ++i) {
      const Point d = random_point(e, 0, 2);
      pts.push_back({c.x + d.x - 1, c.y + d.y - 1});
    }
    try {
      return convex_hull(pts);
    } catch (const Error&) {
    }
  }
}

Segment translate(const Segment& s, const Point& d) { return {{s.a.x + d.x, s.a.y + d.y}, {s.b.x + d.x, s.b.y + d.y}}; }

}  // namespace

TEST_CASE("closed containment") {
  CHECK(contains(unit_square(), pt("0.5", "0.5")));
  CHECK(contains(unit_square(), pt(1, 1)));
  CHECK_FALSE(contains(unit_square(), pt("1.000001", "0.5")));
  CHECK(contains(unit_square(), pt("0", "0.3")));
}

TEST_CASE("segment against polygon") {
  CHECK(segment_intersects({pt(0, 3), pt(6, 3)}, block()));
  CHECK_FALSE(segment_intersects({pt(0, 5), pt(6, 5)}, block()));
  CHECK(segment_intersects({pt(0, 4), pt(6, 4)}, block()));
  CHECK(segment_intersects({pt(0, 6), pt(2, 4)}, block()));
  CHECK_FALSE(segment_intersects({pt(0, 0), pt(1, 5)}, block()));
  CHECK(segment_intersects({pt(3, 3), pt(3, 3)}, block()));
  CHECK_FALSE(segment_intersects({pt(5, 5), pt(5, 5)}, block()));
  CHECK(segment_intersects({pt(3, 3), pt(9, 9)}, block()));
}

TEST_CASE("polygon construction normalizes input") {
  SUBCASE("clockwise input is reversed") {
    ConvexPolygon p({pt(0, 0), pt(0, 1), pt(1, 1), pt(1, 0)});
    CHECK(p.vertices() == std::vector<Point>{pt(1, 0), pt(1, 1), pt(0, 1), pt(0, 0)});
  }
  SUBCASE("collinear and duplicate vertices are dropped") {
    ConvexPolygon p({pt(0, 0), pt("0.5", "0"), pt(1, 0), pt(1, 0), pt(1, 1), pt(0, 1)});
    CHECK(p.vertices().size() == 4);
    CHECK(p == unit_square());
  }
  SUBCASE("degenerate or non-convex input is rejected") {
    CHECK(code_of([] { ConvexPolygon({pt(0, 0), pt(1, 1)}); }) == ErrorCode::InvalidProblem);
    CHECK(code_of([] { ConvexPolygon({pt(0, 0), pt(1, 1), pt(2, 2)}); }) == ErrorCode::InvalidProblem);
    CHECK(code_of([] { ConvexPolygon({pt(0, 0), pt(4, 0), pt(1, 1), pt(0, 4)}); }) == ErrorCode::InvalidProblem);
    CHECK(code_of([] { ConvexPolygon({pt(0, 0), pt(2, 2), pt(2, 0), pt(0, 2)}); }) == ErrorCode::InvalidProblem);
  }
}

TEST_CASE("half-plane and vertex forms agree") {
  Engine e(3);
  for (int n = 0; n < 200; ++n) {
    const ConvexPolygon p = random_polygon(e);
    REQUIRE(p.halfplanes().size() == p.vertices().size());
    for (const auto& v : p.vertices()) {
      CHECK(contains(p, v));
      int tight = 0;
      for (const auto& h : p.halfplanes()) {
        const Rational s = h.nx * v.x + h.ny * v.y;
        CHECK(s <= h.offset);
        if (s == h.offset) ++tight;
      }
      CHECK(tight == 2);
    }
    // Random points: half-plane membership equals the vertex-form test.
    const auto c = oracles::corners(p);
    for (int k = 0; k < 50; ++k) {
      const Point r = random_point(e, 0, 10);
      const auto v = oracles::to_vec(r);
      if (oracles::strictly_inside(c, v)) CHECK(contains(p, r));
      bool outside = false;
      for (std::size_t i = 0; i < c.size(); ++i) {
        const auto a = c[i], b = c[(i + 1) % c.size()];
        if ((b.x - a.x) * (v.y - a.y) - (b.y - a.y) * (v.x - a.x) < -1e-9) outside = true;
      }
      if (outside) CHECK_FALSE(contains(p, r));
    }
  }
}

TEST_CASE("segment test is symmetric, monotone and agrees with sampling") {
  Engine e(5);
  for (int n = 0; n < 300; ++n) {
    const ConvexPolygon p = random_polygon(e);
    const Segment s{random_point(e, 0, 10), random_point(e, 0, 10)};
    const bool hit = segment_intersects(s, p);
    CHECK(hit == segment_intersects({s.b, s.a}, p));
    if (oracles::sampled_interior_hit(oracles::to_vec(s.a), oracles::to_vec(s.b), oracles::corners(p), 2000)) {
      CHECK(hit);
    }
    // Extending the segment along its own line keeps any hit.
    const Segment longer{{s.a.x - (s.b.x - s.a.x), s.a.y - (s.b.y - s.a.y)}, {s.b.x + (s.b.x - s.a.x), s.b.y + (s.b.y - s.a.y)}};
    if (hit) CHECK(segment_intersects(longer, p));
    const Point d = random_point(e, -5, 5);
    std::vector<Point> moved;
    for (const auto& v : p.vertices()) moved.push_back({v.x + d.x, v.y + d.y});
    CHECK(hit == segment_intersects(translate(s, d), ConvexPolygon(moved)));
  }
}

TEST_CASE("polygon overlap and hull") {
  CHECK(polygons_intersect(unit_square(), ConvexPolygon({pt(1, 1), pt(2, 1), pt(2, 2)})));
  CHECK_FALSE(polygons_intersect(unit_square(), block()));
  CHECK(polygons_intersect(block(), rect("2.5", "2.5", "3", "3")));
  CHECK(polygons_intersect(rect("2.5", "2.5", "3", "3"), block()));
  const ConvexPolygon h = convex_hull({pt(0, 0), pt(2, 0), pt(1, 1), pt(2, 2), pt(0, 2)});
  CHECK(h.vertices().size() == 4);
  CHECK(code_of([] { convex_hull({pt(0, 0), pt(1, 1), pt(2, 2), pt(3, 3)}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("distances") {
  CHECK(squared_distance(pt(3, 5), block()) == 1);
  CHECK(squared_distance(pt(3, 3), block()) == 0);
  CHECK(squared_distance(pt(5, 5), block()) == 2);
  CHECK(squared_distance(Segment{pt(0, 6), pt(6, 6)}, block()) == 4);
  CHECK(squared_distance(pt(0, 1), Segment{pt(0, 0), pt(0, 0)}) == 1);
}

TEST_CASE("vertical sections") {
  Rational lo, hi;
  REQUIRE(vertical_section(block(), 3, lo, hi));
  CHECK(lo == 2);
  CHECK(hi == 4);
  CHECK_FALSE(vertical_section(block(), 5, lo, hi));
  const ConvexPolygon tri({pt(0, 0), pt(4, 0), pt(0, 4)});
  REQUIRE(vertical_section(tri, 1, lo, hi));
  CHECK(lo == 0);
  CHECK(hi == 3);
}

TEST_CASE("path length counts segments") {
  CHECK(path_length({pt(0, 0)}) == 0);
  CHECK(path_length({pt(0, 0), pt(1, 1)}) == 1);
  CHECK(path_length(Path(6, pt(0, 0))) == 5);
  CHECK(code_of([] { path_length({}); }) == ErrorCode::EmptyPath);
}

TEST_CASE("path verification") {
  SUBCASE("obstacle-free problem, center to center") {
    const Problem p = open_problem();
    const auto r = verify_path(p, {p.initial.center(), p.goal.center()});
    CHECK(r.is_correct);
    CHECK(r.segment_collisions.empty());
  }
  SUBCASE("start outside the initial set") {
    const Problem p = open_problem();
    const auto r = verify_path(p, {pt(5, 5), p.goal.center()});
    CHECK_FALSE(r.starts_in_initial);
    CHECK_FALSE(r.is_correct);
  }
  SUBCASE("straight path through the wall") {
    const Problem p = wall_problem();
    const Path path{pt("0.5", "0.5"), pt(9, 9)};
    const auto r = verify_path(p, path);
    REQUIRE(r.segment_collisions.size() == 1);
    CHECK(r.segment_collisions[0] == Collision{0, 0});
    CHECK(oracles::sampled_interior_hit(oracles::to_vec(path[0]), oracles::to_vec(path[1]),
                                        oracles::corners(p.obstacles[0])));
  }
  SUBCASE("empty path") {
    CHECK(code_of([] { verify_path(open_problem(), {}); }) == ErrorCode::EmptyPath);
  }
}

TEST_CASE("verification report invariants under fuzzing") {
  Engine e(8);
  const Problem p = open_problem({rect("2", "2", "4", "6"), rect("5", "1", "7", "3"), rect("6", "5", "8", "8")});
  for (int n = 0; n < 500; ++n) {
    Path path = random_path(e, 5);
    if (uniform_below(e, 2)) path.front() = random_point(e, 0, 2);
    const auto r = verify_path(p, path);
    CHECK(r.is_correct == (r.starts_in_initial && r.ends_in_goal && r.segment_collisions.empty()));
    CHECK(std::is_sorted(r.segment_collisions.begin(), r.segment_collisions.end()));
    // Translation leaves the report unchanged.
    const Point d = random_point(e, -3, 3);
    auto shift = [&](const ConvexPolygon& poly) {
      std::vector<Point> v;
      for (const auto& x : poly.vertices()) v.push_back({x.x + d.x, x.y + d.y});
      return ConvexPolygon(v);
    };
    Problem moved{p.name, shift(p.workspace), shift(p.initial), shift(p.goal), {}, {}};
    for (const auto& o : p.obstacles) moved.obstacles.push_back(shift(o));
    Path moved_path;
    for (const auto& w : path) moved_path.push_back({w.x + d.x, w.y + d.y});
    const auto r2 = verify_path(moved, moved_path);
    CHECK(r2.starts_in_initial == r.starts_in_initial);
    CHECK(r2.ends_in_goal == r.ends_in_goal);
    CHECK(r2.segment_collisions == r.segment_collisions);
  }
}
