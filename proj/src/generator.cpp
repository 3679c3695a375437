#include "generator.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "random.hpp"

namespace pathloop {

namespace {

constexpr std::int64_t kMilli = 1000;

Rational ws_min() { return 0; }
Rational ws_max() { return 10; }

ConvexPolygon fixed_initial() { return make_rectangle(Rational(1, 2), Rational(1, 2), Rational(3, 2), Rational(3, 2)); }
ConvexPolygon fixed_goal() { return make_rectangle(Rational(17, 2), Rational(17, 2), Rational(19, 2), Rational(19, 2)); }

std::int64_t floor_milli(const Rational& q) {
  mpz_class out;
  mpz_class scaled = q.get_num() * kMilli;
  mpz_fdiv_q(out.get_mpz_t(), scaled.get_mpz_t(), q.get_den().get_mpz_t());
  return out.get_si();
}

std::int64_t ceil_milli(const Rational& q) {
  mpz_class out;
  mpz_class scaled = q.get_num() * kMilli;
  mpz_cdiv_q(out.get_mpz_t(), scaled.get_mpz_t(), q.get_den().get_mpz_t());
  return out.get_si();
}

Rational milli(std::int64_t v) {
  Rational q(v, kMilli);
  q.canonicalize();
  return q;
}

bool boxes_overlap(const Box& a, const Box& b) {
  return a.min_x <= b.max_x && b.min_x <= a.max_x && a.min_y <= b.max_y && b.min_y <= a.max_y;
}

ConvexPolygon sample_obstacle(Engine& engine, const Box& box) {
  const std::int64_t x0 = ceil_milli(box.min_x), x1 = floor_milli(box.max_x);
  const std::int64_t y0 = ceil_milli(box.min_y), y1 = floor_milli(box.max_y);
  for (;;) {
    std::vector<Point> pts;
    for (int i = 0; i < 4; ++i) {
      const auto x = uniform_between(engine, x0, x1);
      const auto y = uniform_between(engine, y0, y1);
      pts.push_back({milli(x), milli(y)});
    }
    try {
      return convex_hull(std::move(pts));
    } catch (const Error&) {
      // all four samples collinear; draw again
    }
  }
}

}  // namespace

void validate_generator_config(const GeneratorConfig& config) {
  if (config.obstacle_count == 0) throw Error(ErrorCode::InvalidArgument, "obstacle count must be positive");
  if (config.grid_tiles <= config.obstacle_count) {
    throw Error(ErrorCode::InvalidArgument, "grid tiles must exceed the obstacle count");
  }
  if (config.overlap < 0 || config.overlap > 1) throw Error(ErrorCode::InvalidArgument, "overlap must be in [0, 1]");
  if (config.max_regeneration_attempts == 0) {
    throw Error(ErrorCode::InvalidArgument, "max regeneration attempts must be positive");
  }
}

std::vector<Tile> generator_tiles(const GeneratorConfig& config) {
  validate_generator_config(config);
  const auto cols = static_cast<std::uint32_t>(std::ceil(std::sqrt(static_cast<double>(config.grid_tiles))));
  const std::uint32_t rows = (config.grid_tiles + cols - 1) / cols;
  const Rational span = ws_max() - ws_min();
  const Rational w = span / cols, h = span / rows;
  const Box initial = fixed_initial().bounds(), goal = fixed_goal().bounds();

  std::vector<Tile> tiles;
  for (std::uint32_t i = 0; i < config.grid_tiles; ++i) {
    const std::uint32_t r = i / cols, c = i % cols;
    Box cell{ws_min() + w * c, ws_min() + h * r, ws_min() + w * (c + 1), ws_min() + h * (r + 1)};
    const Rational gx = w * config.overlap / 2, gy = h * config.overlap / 2;
    Box expanded{std::max<Rational>(cell.min_x - gx, ws_min()), std::max<Rational>(cell.min_y - gy, ws_min()),
                 std::min<Rational>(cell.max_x + gx, ws_max()), std::min<Rational>(cell.max_y + gy, ws_max())};
    if (boxes_overlap(expanded, initial) || boxes_overlap(expanded, goal)) continue;
    tiles.push_back({cell, expanded});
  }
  return tiles;
}

Problem generate_random(const GeneratorConfig& config) {
  const auto tiles = generator_tiles(config);
  if (tiles.size() < config.obstacle_count) {
    throw Error(ErrorCode::InvalidArgument, "only " + std::to_string(tiles.size()) +
                                                " tiles avoid the initial and goal sets; need " +
                                                std::to_string(config.obstacle_count));
  }

  Engine engine(config.seed);
  const std::string k = std::to_string(config.obstacle_count);
  for (std::uint32_t attempt = 0; attempt < config.max_regeneration_attempts; ++attempt) {
    std::vector<std::size_t> order(tiles.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = 0; i < config.obstacle_count; ++i) {
      const std::size_t j = i + uniform_below(engine, order.size() - i);
      std::swap(order[i], order[j]);
    }
    std::vector<ConvexPolygon> obstacles;
    for (std::size_t i = 0; i < config.obstacle_count; ++i) {
      obstacles.push_back(sample_obstacle(engine, tiles[order[i]].expanded));
    }
    Problem problem{"random-k" + k + "-s" + std::to_string(config.seed),
                    make_rectangle(ws_min(), ws_min(), ws_max(), ws_max()),
                    fixed_initial(),
                    fixed_goal(),
                    std::move(obstacles),
                    {"random", "k=" + k}};
    if (!config.require_solvable || solvable(problem, config.oracle)) return problem;
  }
  throw Error(ErrorCode::GenerationExhausted,
              "no solvable instance within " + std::to_string(config.max_regeneration_attempts) + " attempts");
}

Problem make_unsolvable_variant(const Problem& problem, std::uint64_t seed, const OracleConfig& oracle) {
  if (!solvable(problem, oracle)) {
    throw Error(ErrorCode::Precondition, "problem '" + problem.name + "' is already unsolvable");
  }
  const Box& ws = problem.workspace.bounds();
  const Box& i = problem.initial.bounds();
  const Box& g = problem.goal.bounds();

  Engine engine(seed);
  // Offset of the slab center within the gap, in [0.25, 0.75].
  const Rational t = milli(uniform_between(engine, 250, 750));

  std::optional<ConvexPolygon> slab;
  auto place = [&](const Rational& lo, const Rational& hi) {
    const Rational gap = hi - lo;
    Rational width = std::min<Rational>(gap / 3, Rational(1, 2));
    Rational start = round_to_digits(lo + t * gap - width / 2);
    width = round_to_digits(width);
    if (width <= 0 || start <= lo || start + width >= hi) return std::optional<std::pair<Rational, Rational>>{};
    return std::optional<std::pair<Rational, Rational>>{{start, start + width}};
  };

  if (i.max_x < g.min_x || g.max_x < i.min_x) {
    const bool i_left = i.max_x < g.min_x;
    if (auto span = i_left ? place(i.max_x, g.min_x) : place(g.max_x, i.min_x)) {
      slab = make_rectangle(span->first, ws.min_y, span->second, ws.max_y);
    }
  }
  if (!slab && (i.max_y < g.min_y || g.max_y < i.min_y)) {
    const bool i_below = i.max_y < g.min_y;
    if (auto span = i_below ? place(i.max_y, g.min_y) : place(g.max_y, i.min_y)) {
      slab = make_rectangle(ws.min_x, span->first, ws.max_x, span->second);
    }
  }
  if (!slab) throw Error(ErrorCode::CannotBlock, "no slab separates the initial and goal sets of '" + problem.name + "'");

  Problem variant = problem;
  variant.name += " (unsolvable)";
  variant.obstacles.push_back(*slab);
  variant.tags.push_back("unsolvable");
  validate_problem(variant);
  if (solvable(variant, oracle)) {
    throw Error(ErrorCode::CannotBlock, "slab did not block '" + problem.name + "'");
  }
  return variant;
}

}  // namespace pathloop
