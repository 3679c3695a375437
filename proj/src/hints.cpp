#include "hints.hpp"

#include <algorithm>

#include "errors.hpp"
#include "verify.hpp"

namespace pathloop {

std::string HintStrategy::name() const {
  const HintStrategy flags_only{collision, free_space, prefix, image, kDefaultSliceCount};
  if (flags_only == none()) return "none";
  if (flags_only == C()) return "C";
  if (flags_only == CFP()) return "CFP";
  if (flags_only == CFPI()) return "CFPI";
  std::string out;
  auto add = [&](bool on, const char* tag) {
    if (on) out += (out.empty() ? "" : "+") + std::string(tag);
  };
  add(collision, "collision");
  add(free_space, "free_space");
  add(prefix, "prefix");
  add(image, "image");
  return out;
}

HintStrategy HintStrategy::from_name(const std::string& name) {
  if (name == "none") return none();
  if (name == "C") return C();
  if (name == "CFP") return CFP();
  if (name == "CFPI") return CFPI();
  throw Error(ErrorCode::InvalidArgument, "unknown hint strategy '" + name + "' (expected none, C, CFP or CFPI)");
}

CollisionHint collision_hint(const Problem& problem, const Path& path) {
  const VerificationReport report = verify_path(problem, path);
  CollisionHint hint{report.starts_in_initial, report.ends_in_goal, {}};
  for (const auto& c : report.segment_collisions) {
    hint.colliding_segments.push_back(
        {c.segment_index, c.obstacle_index, path[c.segment_index], path[c.segment_index + 1]});
  }
  return hint;
}

FreeSpaceHint free_space_hint(const Problem& problem, std::uint32_t slice_count,
                              const Rational& epsilon_fraction) {
  if (slice_count == 0) throw Error(ErrorCode::InvalidArgument, "slice_count must be positive");
  const Rational epsilon = clearance_from_fraction(problem.workspace, epsilon_fraction);
  const Rational eps2 = epsilon * epsilon;
  const Box& ws = problem.workspace.bounds();
  const Rational width = ws.max_x - ws.min_x;

  FreeSpaceHint hint;
  for (std::uint32_t i = 0; i < slice_count; ++i) {
    const Rational x =
        round_to_digits(ws.min_x + width * Rational(2 * i + 1, 2 * static_cast<long>(slice_count)));
    std::vector<std::pair<Rational, Rational>> blocked;
    for (const auto& o : problem.obstacles) {
      Rational lo, hi;
      if (vertical_section(o, x, lo, hi)) blocked.emplace_back(lo, hi);
    }
    std::sort(blocked.begin(), blocked.end());

    FreeSpaceSlice slice{x, {}};
    auto emit = [&](const Rational& lo, const Rational& hi) {
      if (hi - lo < 2 * epsilon) return;
      const Point p{x, round_to_digits((lo + hi) / 2)};
      if (!contains(problem.workspace, p)) return;
      for (const auto& o : problem.obstacles) {
        if (squared_distance(p, o) < eps2) return;
      }
      slice.safe_points.push_back(p);
    };
    Rational cursor = ws.min_y;
    for (const auto& [lo, hi] : blocked) {
      if (lo > cursor) emit(cursor, lo);
      if (hi > cursor) cursor = hi;
    }
    if (ws.max_y > cursor) emit(cursor, ws.max_y);
    hint.slices.push_back(std::move(slice));
  }
  return hint;
}

PrefixHint prefix_hint(const Problem& problem, const Path& path) {
  if (path.empty()) throw Error(ErrorCode::EmptyPath, "path has no waypoints");
  PrefixHint hint;
  if (!contains(problem.initial, path.front())) return hint;
  hint.prefix.push_back(path.front());
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Segment seg{path[i], path[i + 1]};
    const bool hit = std::any_of(problem.obstacles.begin(), problem.obstacles.end(),
                                 [&](const ConvexPolygon& o) { return segment_intersects(seg, o); });
    if (hit) break;
    hint.prefix.push_back(path[i + 1]);
  }
  return hint;
}

HintBundle compute_hints(const Problem& problem, const Path& candidate, const HintStrategy& strategy,
                         const RenderSettings& render) {
  HintBundle bundle;
  if (strategy.collision) bundle.collision = collision_hint(problem, candidate);
  if (strategy.free_space) bundle.free_space = free_space_hint(problem, strategy.slice_count);
  if (strategy.prefix) bundle.prefix = prefix_hint(problem, candidate);
  if (strategy.image) bundle.image = render_image(problem, candidate, render);
  return bundle;
}

nlohmann::ordered_json hints_to_json(const HintBundle& bundle) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  if (bundle.collision) {
    auto& c = doc["collision"];
    c["starts_in_initial"] = bundle.collision->starts_in_initial;
    c["ends_in_goal"] = bundle.collision->ends_in_goal;
    c["colliding_segments"] = nlohmann::ordered_json::array();
    for (const auto& hit : bundle.collision->colliding_segments) {
      c["colliding_segments"].push_back({{"segment", hit.segment_index},
                                         {"obstacle", hit.obstacle_index},
                                         {"from", point_to_json(hit.from)},
                                         {"to", point_to_json(hit.to)}});
    }
  }
  if (bundle.free_space) {
    auto& slices = doc["free_space"] = nlohmann::ordered_json::array();
    for (const auto& s : bundle.free_space->slices) {
      slices.push_back({{"x", to_decimal(s.x)}, {"safe_points", path_to_json(s.safe_points)}});
    }
  }
  if (bundle.prefix) doc["prefix"] = path_to_json(bundle.prefix->prefix);
  if (bundle.image) {
    doc["image"] = {{"format", "png"},
                    {"width", bundle.image->width},
                    {"height", bundle.image->height},
                    {"bytes", bundle.image->png.size()}};
  }
  return doc;
}

}  // namespace pathloop
