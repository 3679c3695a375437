#pragma once

#include <compare>
#include <cstddef>
#include <vector>

#include <json.hpp>

#include "problem.hpp"

namespace pathloop {

struct Collision {
  std::size_t segment_index;
  std::size_t obstacle_index;

  friend auto operator<=>(const Collision&, const Collision&) = default;
};

struct VerificationReport {
  bool starts_in_initial = false;
  bool ends_in_goal = false;
  /// Every intersecting (segment, obstacle) pair, sorted lexicographically.
  std::vector<Collision> segment_collisions;
  bool is_correct = false;

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

/// Exact correctness check of a candidate path. Throws Error{EmptyPath}.
VerificationReport verify_path(const Problem& problem, const Path& path);

nlohmann::ordered_json report_to_json(const VerificationReport& report);

}  // namespace pathloop
