#include <doctest.h>

#include <cmath>
#include <set>

#include "generator.hpp"
#include "helpers.hpp"
#include "hints.hpp"
#include "support/oracles.hpp"
#include "verify.hpp"

using namespace testing;

namespace {

Problem fuzz_problem(Engine& e, std::uint64_t seed) {
  GeneratorConfig c;
  c.obstacle_count = 1 + static_cast<std::uint32_t>(uniform_below(e, 5));
  c.seed = seed;
  return generate_random(c);
}

Path fuzz_path(Engine& e, const Problem& p) {
  Path path = random_path(e, 6);
  if (uniform_below(e, 3) != 0) path.front() = p.initial.center();
  if (uniform_below(e, 3) != 0) path.back() = p.goal.center();
  return path;
}

double epsilon_of(const Problem& p) {
  return to_double(clearance_from_fraction(p.workspace, default_clearance_fraction()));
}

}  // namespace

TEST_CASE("collision hint mirrors verification") {
  SUBCASE("correct path") {
    const Problem p = open_problem();
    const auto h = collision_hint(p, {p.initial.center(), p.goal.center()});
    CHECK(h.starts_in_initial);
    CHECK(h.ends_in_goal);
    CHECK(h.colliding_segments.empty());
  }
  SUBCASE("straight through the wall") {
    const Problem p = wall_problem();
    const Path path{pt("0.5", "0.5"), pt(9, 9)};
    const auto h = collision_hint(p, path);
    REQUIRE(h.colliding_segments.size() == 1);
    CHECK(h.colliding_segments[0].segment_index == 0);
    CHECK(h.colliding_segments[0].obstacle_index == 0);
    CHECK(h.colliding_segments[0].from == path[0]);
    CHECK(h.colliding_segments[0].to == path[1]);
  }
  SUBCASE("ending outside the goal") {
    const Problem p = open_problem();
    CHECK_FALSE(collision_hint(p, {p.initial.center(), pt(5, 5)}).ends_in_goal);
  }
  SUBCASE("fuzzed agreement") {
    Engine e(21);
    for (std::uint64_t n = 0; n < 1000; ++n) {
      const Problem p = fuzz_problem(e, n);
      const Path path = fuzz_path(e, p);
      const auto h = collision_hint(p, path);
      const auto r = verify_path(p, path);
      CHECK(h.starts_in_initial == r.starts_in_initial);
      CHECK(h.ends_in_goal == r.ends_in_goal);
      REQUIRE(h.colliding_segments.size() == r.segment_collisions.size());
      for (std::size_t i = 0; i < r.segment_collisions.size(); ++i) {
        CHECK(h.colliding_segments[i].segment_index == r.segment_collisions[i].segment_index);
        CHECK(h.colliding_segments[i].obstacle_index == r.segment_collisions[i].obstacle_index);
      }
    }
  }
  CHECK(code_of([] { collision_hint(open_problem(), {}); }) == ErrorCode::EmptyPath);
}

TEST_CASE("free-space hint") {
  SUBCASE("obstacle-free workspace") {
    const auto h = free_space_hint(open_problem(), 3);
    REQUIRE(h.slices.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(std::abs(h.slices[i].x.get_d() - 10.0 * (2 * i + 1) / 6) < 1e-9);
      REQUIRE(h.slices[i].safe_points.size() == 1);
      CHECK(h.slices[i].safe_points[0].y == 5);
    }
  }
  SUBCASE("centered square splits the middle slice") {
    const auto h = free_space_hint(open_problem({square(4, 4, 6, 6)}), 5);
    REQUIRE(h.slices.size() == 5);
    CHECK(h.slices[2].x == 5);
    REQUIRE(h.slices[2].safe_points.size() == 2);
    CHECK(h.slices[2].safe_points[0] == pt(5, 2));
    CHECK(h.slices[2].safe_points[1] == pt(5, 8));
  }
  SUBCASE("gaps narrower than twice the clearance get no point") {
    // Clearance is 0.001 * diagonal ~ 0.01414; a 0.02 gap is too narrow.
    const auto h = free_space_hint(open_problem({rect("4", "0", "6", "4.99"), rect("4", "5.01", "6", "10")}), 5);
    CHECK(h.slices[2].safe_points.empty());
    const auto wide = free_space_hint(open_problem({rect("4", "0", "6", "4.9"), rect("4", "5.1", "6", "10")}), 5);
    REQUIRE(wide.slices[2].safe_points.size() == 1);
    CHECK(wide.slices[2].safe_points[0] == pt(5, 5));
  }
  SUBCASE("points keep their clearance") {
    Engine e(4);
    for (std::uint64_t n = 0; n < 100; ++n) {
      const Problem p = fuzz_problem(e, n);
      const double eps = epsilon_of(p);
      const auto h = free_space_hint(p, 1 + static_cast<std::uint32_t>(uniform_below(e, 8)));
      for (const auto& s : h.slices) {
        for (const auto& point : s.safe_points) {
          CHECK(point.x == s.x);
          CHECK(contains(p.workspace, point));
          for (const auto& o : p.obstacles) {
            CHECK_FALSE(contains(o, point));
            CHECK(oracles::sampled_boundary_distance(oracles::to_vec(point), oracles::corners(o)) >= eps * (1 - 1e-9));
          }
        }
      }
    }
  }
  CHECK(code_of([] { free_space_hint(open_problem(), 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("prefix hint") {
  const Problem p = open_problem({square(4, 4, 6, 6)});
  SUBCASE("correct path is returned whole") {
    const Path path{pt(1, 1), pt(9, 1), pt(9, 9)};
    CHECK(prefix_hint(p, path).prefix == path);
  }
  SUBCASE("start outside I") {
    CHECK(prefix_hint(p, {pt(3, 3), pt(9, 9)}).prefix.empty());
  }
  SUBCASE("third segment collides") {
    const Path path{pt(1, 1), pt(3, 1), pt(3, 3), pt(7, 7)};
    CHECK(prefix_hint(p, path).prefix == Path{pt(1, 1), pt(3, 1), pt(3, 3)});
    CHECK(prefix_hint(p, path).prefix == oracles::longest_correct_prefix(p, path));
  }
  SUBCASE("maximality under fuzzing") {
    Engine e(9);
    for (std::uint64_t n = 0; n < 500; ++n) {
      const Problem q = fuzz_problem(e, n);
      const Path path = fuzz_path(e, q);
      const Path prefix = prefix_hint(q, path).prefix;
      CHECK(prefix == oracles::longest_correct_prefix(q, path));
      CHECK(std::equal(prefix.begin(), prefix.end(), path.begin()));
      if (!prefix.empty() && prefix.size() < path.size()) {
        const Path extended(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(prefix.size() + 1));
        CHECK_FALSE(verify_path(q, extended).segment_collisions.empty());
      }
    }
  }
}

TEST_CASE("rendering") {
  const Problem p = open_problem({square(4, 4, 6, 6)});
  const Path path{pt(1, 1), pt(9, 1), pt(9, 9)};
  const auto a = render_image(p, path);
  CHECK(a.width == 512);
  CHECK(a.height == 512);
  CHECK(render_image(p, path).png == a.png);

  const auto png = oracles::decode_png(a.png);
  REQUIRE(png);
  REQUIRE(png->width == 512);
  // Inverse map: uniform scale, y flipped, workspace centered.
  const double scale = 512.0 / 10.0;
  auto pixel_of = [&](double x, double y) {
    return png->pixel(static_cast<std::uint32_t>(x * scale), static_cast<std::uint32_t>((10 - y) * scale));
  };
  CHECK(pixel_of(5, 5) == 0xFF0000);
  CHECK(pixel_of(1.2, 1.2) == 0x0000FF);
  CHECK(pixel_of(8.8, 8.8) == 0x00A000);
  CHECK(pixel_of(9, 5) == 0x000000);
  CHECK(pixel_of(3, 7) == 0xFFFFFF);

  SUBCASE("obstacle-free problem without a path") {
    const auto img = oracles::decode_png(render_image(open_problem(), std::nullopt).png);
    REQUIRE(img);
    std::set<std::uint32_t> colors;
    for (std::uint32_t y = 0; y < img->height; ++y) {
      for (std::uint32_t x = 0; x < img->width; ++x) colors.insert(img->pixel(x, y));
    }
    CHECK(colors == std::set<std::uint32_t>{0xFFFFFF, 0x0000FF, 0x00A000});
  }
  SUBCASE("non-square workspace is centered with a uniform scale") {
    Problem wide{"wide", square(0, 0, 20, 10), square(1, 1, 2, 2), square(18, 8, 19, 9), {square(9, 4, 11, 6)}, {}};
    const auto img = oracles::decode_png(render_image(wide, std::nullopt, {400, 400}).png);
    REQUIRE(img);
    // 20 units over 400 px; the 10-unit height occupies rows 100..299.
    CHECK(img->pixel(200, 200) == 0xFF0000);
    CHECK(img->pixel(30, 270) == 0x0000FF);
    CHECK(img->pixel(370, 130) == 0x00A000);
  }
}

TEST_CASE("hint bundles follow the strategy") {
  const Problem p = wall_problem();
  const Path path{pt("0.5", "0.5"), pt(9, 9)};
  CHECK(compute_hints(p, path, HintStrategy::none()).empty());
  const auto c = compute_hints(p, path, HintStrategy::C());
  CHECK(c.collision);
  CHECK_FALSE(c.free_space);
  const auto cfp = compute_hints(p, path, HintStrategy::CFP());
  CHECK(cfp.collision);
  CHECK(cfp.free_space);
  CHECK(cfp.prefix);
  CHECK_FALSE(cfp.image);
  const auto all = compute_hints(p, path, HintStrategy::CFPI());
  REQUIRE(all.image);
  CHECK(all.image->png == render_image(p, path).png);
  const auto doc = hints_to_json(all);
  CHECK(doc.at("image").at("bytes") == all.image->png.size());
  CHECK(doc.at("prefix").size() == 1);
}

TEST_CASE("strategy presets") {
  CHECK(HintStrategy::from_name("none") == HintStrategy::none());
  CHECK(HintStrategy::from_name("CFPI").image);
  CHECK(HintStrategy::CFP().name() == "CFP");
  HintStrategy custom;
  custom.prefix = true;
  CHECK(custom.name() == "prefix");
  CHECK(code_of([] { HintStrategy::from_name("CF"); }) == ErrorCode::InvalidArgument);
}
