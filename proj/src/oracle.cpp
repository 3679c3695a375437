#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "errors.hpp"
#include "prompts.hpp"
#include "verify.hpp"

namespace pathloop {

namespace {

std::vector<Point> pushed_corners(const ConvexPolygon& poly, double epsilon) {
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  std::vector<Point> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point& prev = v[(i + n - 1) % n];
    const Point& cur = v[i];
    const Point& next = v[(i + 1) % n];
    // Outward unit normals of the incoming and outgoing edges (CCW order).
    auto normal = [](const Point& a, const Point& b) {
      const double dx = to_double(b.x - a.x);
      const double dy = to_double(b.y - a.y);
      const double len = std::hypot(dx, dy);
      return std::pair{dy / len, -dx / len};
    };
    const auto [n1x, n1y] = normal(prev, cur);
    const auto [n2x, n2y] = normal(cur, next);
    double bx = n1x + n2x;
    double by = n1y + n2y;
    const double blen = std::hypot(bx, by);
    bx /= blen;
    by /= blen;
    out.push_back({from_double(to_double(cur.x) + epsilon * bx),
                   from_double(to_double(cur.y) + epsilon * by)});
  }
  return out;
}

bool visible(const Problem& problem, const Point& a, const Point& b) {
  const Segment seg{a, b};
  return std::none_of(problem.obstacles.begin(), problem.obstacles.end(),
                      [&](const ConvexPolygon& o) { return segment_intersects(seg, o); });
}

double distance(const Point& a, const Point& b) {
  return std::hypot(to_double(a.x - b.x), to_double(a.y - b.y));
}

}  // namespace

OracleResult plan(const Problem& problem, const OracleConfig& config) {
  if (config.epsilon_fraction <= 0) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  const Rational epsilon = clearance_from_fraction(problem.workspace, config.epsilon_fraction);
  const Point start = problem.initial.center();
  const Point goal = problem.goal.center();

  std::vector<Point> nodes{start, goal};
  for (const auto& obstacle : problem.obstacles) {
    for (auto& p : pushed_corners(obstacle, to_double(epsilon))) {
      if (!contains(problem.workspace, p)) continue;
      const bool blocked = std::any_of(problem.obstacles.begin(), problem.obstacles.end(),
                                       [&](const ConvexPolygon& o) { return contains(o, p); });
      if (!blocked) nodes.push_back(std::move(p));
    }
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  auto index_of = [&](const Point& p) {
    return static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), p) - nodes.begin());
  };
  const std::size_t src = index_of(start);
  const std::size_t dst = index_of(goal);
  const std::size_t n = nodes.size();

  // Visibility is computed lazily; most pairs are never relaxed.
  std::vector<signed char> vis(n * n, -1);
  auto can_see = [&](std::size_t i, std::size_t j) {
    signed char& slot = vis[std::min(i, j) * n + std::max(i, j)];
    if (slot < 0) slot = visible(problem, nodes[i], nodes[j]) ? 1 : 0;
    return slot == 1;
  };

  // Lexicographic cost: (primary, secondary). Euclidean objective uses
  // (length, segments); segment objective uses (segments, length).
  using Cost = std::pair<double, double>;
  const Cost inf{std::numeric_limits<double>::infinity(), 0};
  std::vector<Cost> best(n, inf);
  std::vector<std::size_t> parent(n, n);
  std::vector<bool> done(n, false);
  using Entry = std::pair<Cost, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  best[src] = {0, 0};
  queue.push({best[src], src});
  while (!queue.empty()) {
    const auto [cost, u] = queue.top();
    queue.pop();
    if (done[u]) continue;
    done[u] = true;
    if (u == dst) break;
    for (std::size_t v = 0; v < n; ++v) {
      if (done[v] || v == u) continue;
      const double len = distance(nodes[u], nodes[v]);
      const Cost next = config.objective == Objective::MinEuclideanLength
                            ? Cost{cost.first + len, cost.second + 1}
                            : Cost{cost.first + 1, cost.second + len};
      if (!(next < best[v])) continue;
      if (!can_see(u, v)) continue;
      best[v] = next;
      parent[v] = u;
      queue.push({next, v});
    }
  }

  OracleResult result;
  if (!done[dst]) return result;
  Path path;
  for (std::size_t v = dst; v != n; v = parent[v]) {
    path.push_back(nodes[v]);
    if (v == src) break;
  }
  std::reverse(path.begin(), path.end());

  const VerificationReport report = verify_path(problem, path);
  if (!report.is_correct) {
    throw Error(ErrorCode::Internal, "oracle produced a path that fails verification for " + problem.name);
  }
  result.solvable = true;
  result.cost = config.objective == Objective::MinSegments
                    ? Rational(static_cast<long>(path_length(path)))
                    : from_double(best[dst].first);
  result.path = std::move(path);
  return result;
}

bool solvable(const Problem& problem, const OracleConfig& config) {
  return plan(problem, config).solvable;
}

std::string export_finetune_dataset(const std::vector<Problem>& problems, const OracleConfig& config,
                                    DatasetEnvelope envelope) {
  std::vector<std::string> unsolvable;
  std::string out;
  for (const auto& problem : problems) {
    const OracleResult result = plan(problem, config);
    if (!result.solvable) {
      unsolvable.push_back(problem.name);
      continue;
    }
    const auto messages = initial_prompt(problem, HintStrategy::none());
    const std::string completion = format_points(*result.path);
    nlohmann::ordered_json record;
    if (envelope == DatasetEnvelope::PromptCompletion) {
      record["prompt"] = render_prompt_text(messages);
      record["completion"] = completion;
    } else {
      record["messages"] = nlohmann::ordered_json::array();
      for (const auto& m : messages) {
        record["messages"].push_back({{"role", role_name(m.role)}, {"content", m.text}});
      }
      record["messages"].push_back({{"role", "assistant"}, {"content", completion}});
    }
    out += record.dump() + "\n";
  }
  if (!unsolvable.empty()) {
    std::string names;
    for (const auto& n : unsolvable) names += (names.empty() ? "" : ", ") + n;
    throw Error(ErrorCode::UnsolvableInBatch, "unsolvable problems in batch: " + names);
  }
  return out;
}

}  // namespace pathloop
