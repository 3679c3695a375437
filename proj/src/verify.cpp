#include "verify.hpp"

#include "errors.hpp"

namespace pathloop {

VerificationReport verify_path(const Problem& problem, const Path& path) {
  if (path.empty()) throw Error(ErrorCode::EmptyPath, "path has no waypoints");
  VerificationReport report;
  report.starts_in_initial = contains(problem.initial, path.front());
  report.ends_in_goal = contains(problem.goal, path.back());
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Segment seg{path[i], path[i + 1]};
    for (std::size_t j = 0; j < problem.obstacles.size(); ++j) {
      if (segment_intersects(seg, problem.obstacles[j])) report.segment_collisions.push_back({i, j});
    }
  }
  report.is_correct =
      report.starts_in_initial && report.ends_in_goal && report.segment_collisions.empty();
  return report;
}

nlohmann::ordered_json report_to_json(const VerificationReport& report) {
  nlohmann::ordered_json doc;
  doc["is_correct"] = report.is_correct;
  doc["starts_in_initial"] = report.starts_in_initial;
  doc["ends_in_goal"] = report.ends_in_goal;
  doc["segment_collisions"] = nlohmann::ordered_json::array();
  for (const auto& c : report.segment_collisions) {
    doc["segment_collisions"].push_back({c.segment_index, c.obstacle_index});
  }
  return doc;
}

}  // namespace pathloop
