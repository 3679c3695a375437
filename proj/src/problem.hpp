#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "geometry.hpp"

namespace pathloop {

struct Problem {
  std::string name;
  ConvexPolygon workspace;
  ConvexPolygon initial;
  ConvexPolygon goal;
  std::vector<ConvexPolygon> obstacles;
  std::vector<std::string> tags;

  friend bool operator==(const Problem&, const Problem&) = default;
};

/// Checks the structural invariants: rectangular axis-aligned workspace,
/// every region inside it, and initial/goal sets clear of every obstacle.
/// Throws Error{InvalidProblem} naming the violated invariant.
void validate_problem(const Problem& problem);

Problem load_problem(std::string_view document);
Problem load_problem_file(const std::filesystem::path& file);

nlohmann::ordered_json problem_to_json(const Problem& problem);
Problem problem_from_json(const nlohmann::json& document);

/// Canonical serialization (2-space indented JSON, trailing newline).
std::string serialize_problem(const Problem& problem);

// Point and polygon encodings shared with the other document formats.
nlohmann::ordered_json point_to_json(const Point& p);
Point point_from_json(const nlohmann::json& value);
nlohmann::ordered_json path_to_json(const Path& path);
Path path_from_json(const nlohmann::json& value);

/// "[[x, y], [x, y]]" -- the canonical waypoint syntax used in prompts and
/// completions.
std::string format_points(const std::vector<Point>& points);
std::string format_point(const Point& p);

/// Loads every *.json file of a directory in filename order.
std::vector<Problem> load_problem_directory(const std::filesystem::path& dir);

}  // namespace pathloop
