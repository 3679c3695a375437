#include "problem.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace pathloop {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void parse_error(const std::string& why) {
  throw Error(ErrorCode::Parse, "problem document: " + why);
}

[[noreturn]] void invariant(const std::string& what) {
  throw Error(ErrorCode::InvalidProblem, what);
}

Rational coordinate_from_json(const json& value) {
  if (value.is_string()) return parse_decimal(value.get<std::string>());
  if (value.is_number_integer()) return Rational(value.get<long>());
  if (value.is_number_float()) {
    // JSON floats are accepted via their shortest round-trip spelling.
    char buf[64];
    const double d = value.get<double>();
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d, std::chars_format::fixed);
    if (ec != std::errc()) parse_error("unrepresentable coordinate");
    return parse_decimal(std::string_view(buf, static_cast<std::size_t>(end - buf)));
  }
  parse_error("coordinate must be a decimal string or number");
}

ConvexPolygon polygon_from_json(const json& value, const std::string& field) {
  if (!value.is_array()) parse_error(field + " must be an array of [x, y] pairs");
  std::vector<Point> pts;
  for (const auto& entry : value) pts.push_back(point_from_json(entry));
  try {
    return ConvexPolygon(std::move(pts));
  } catch (const Error& e) {
    invariant(field + ": " + e.what());
  }
}

ordered_json polygon_to_json(const ConvexPolygon& poly) {
  ordered_json arr = ordered_json::array();
  for (const auto& v : poly.vertices()) arr.push_back(point_to_json(v));
  return arr;
}

bool inside(const ConvexPolygon& outer, const ConvexPolygon& inner) {
  return std::all_of(inner.vertices().begin(), inner.vertices().end(),
                     [&](const Point& v) { return contains(outer, v); });
}

}  // namespace

ordered_json point_to_json(const Point& p) {
  return ordered_json::array({to_decimal(p.x), to_decimal(p.y)});
}

Point point_from_json(const json& value) {
  if (!value.is_array() || value.size() != 2) parse_error("point must be an [x, y] pair");
  return {coordinate_from_json(value[0]), coordinate_from_json(value[1])};
}

ordered_json path_to_json(const Path& path) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : path) arr.push_back(point_to_json(p));
  return arr;
}

Path path_from_json(const json& value) {
  if (!value.is_array()) parse_error("path must be an array of [x, y] pairs");
  Path path;
  for (const auto& entry : value) path.push_back(point_from_json(entry));
  return path;
}

std::string format_point(const Point& p) {
  return "[" + to_decimal(p.x) + ", " + to_decimal(p.y) + "]";
}

std::string format_points(const std::vector<Point>& points) {
  std::string out = "[";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) out += ", ";
    out += format_point(points[i]);
  }
  return out + "]";
}

void validate_problem(const Problem& p) {
  const auto& ws = p.workspace.vertices();
  bool axis_aligned = ws.size() == 4;
  for (std::size_t i = 0; axis_aligned && i < ws.size(); ++i) {
    const Point& a = ws[i];
    const Point& b = ws[(i + 1) % ws.size()];
    axis_aligned = a.x == b.x || a.y == b.y;
  }
  if (!axis_aligned) invariant("workspace must be an axis-aligned rectangle");
  if (!inside(p.workspace, p.initial)) invariant("initial set lies outside the workspace");
  if (!inside(p.workspace, p.goal)) invariant("goal set lies outside the workspace");
  for (std::size_t j = 0; j < p.obstacles.size(); ++j) {
    const auto& o = p.obstacles[j];
    if (!inside(p.workspace, o)) invariant("obstacle " + std::to_string(j) + " lies outside the workspace");
    if (polygons_intersect(o, p.initial)) invariant("initial set intersects obstacle " + std::to_string(j));
    if (polygons_intersect(o, p.goal)) invariant("goal set intersects obstacle " + std::to_string(j));
  }
}

Problem problem_from_json(const json& doc) {
  if (!doc.is_object()) parse_error("top level must be an object");
  for (const char* key : {"name", "workspace", "initial", "goal", "obstacles"}) {
    if (!doc.contains(key)) parse_error(std::string("missing field '") + key + "'");
  }
  for (const auto& [key, _] : doc.items()) {
    static const std::vector<std::string> known = {"name", "workspace", "initial", "goal", "obstacles", "tags"};
    if (std::find(known.begin(), known.end(), key) == known.end()) parse_error("unknown field '" + key + "'");
  }
  if (!doc["name"].is_string()) parse_error("name must be a string");
  if (!doc["obstacles"].is_array()) parse_error("obstacles must be an array");

  std::vector<ConvexPolygon> obstacles;
  for (std::size_t j = 0; j < doc["obstacles"].size(); ++j) {
    obstacles.push_back(polygon_from_json(doc["obstacles"][j], "obstacle " + std::to_string(j)));
  }
  std::vector<std::string> tags;
  if (doc.contains("tags")) {
    if (!doc["tags"].is_array()) parse_error("tags must be an array of strings");
    for (const auto& t : doc["tags"]) {
      if (!t.is_string()) parse_error("tags must be an array of strings");
      tags.push_back(t.get<std::string>());
    }
  }
  Problem problem{doc["name"].get<std::string>(),
                  polygon_from_json(doc["workspace"], "workspace"),
                  polygon_from_json(doc["initial"], "initial"),
                  polygon_from_json(doc["goal"], "goal"),
                  std::move(obstacles),
                  std::move(tags)};
  validate_problem(problem);
  return problem;
}

Problem load_problem(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    parse_error(e.what());
  }
  return problem_from_json(doc);
}

Problem load_problem_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_problem(buf.str());
}

ordered_json problem_to_json(const Problem& p) {
  ordered_json doc;
  doc["name"] = p.name;
  doc["workspace"] = polygon_to_json(p.workspace);
  doc["initial"] = polygon_to_json(p.initial);
  doc["goal"] = polygon_to_json(p.goal);
  doc["obstacles"] = ordered_json::array();
  for (const auto& o : p.obstacles) doc["obstacles"].push_back(polygon_to_json(o));
  doc["tags"] = p.tags;
  return doc;
}

namespace {

std::string polygon_text(const ConvexPolygon& poly, const std::string& indent) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < poly.vertices().size(); ++i) {
    out += indent + "  " + point_to_json(poly.vertices()[i]).dump(-1, ' ', false);
    out += i + 1 < poly.vertices().size() ? ",\n" : "\n";
  }
  return out + indent + "]";
}

}  // namespace

std::string serialize_problem(const Problem& problem) {
  // One vertex per line; otherwise plain 2-space JSON.
  std::string out = "{\n";
  out += "  \"name\": " + ordered_json(problem.name).dump() + ",\n";
  out += "  \"workspace\": " + polygon_text(problem.workspace, "  ") + ",\n";
  out += "  \"initial\": " + polygon_text(problem.initial, "  ") + ",\n";
  out += "  \"goal\": " + polygon_text(problem.goal, "  ") + ",\n";
  out += "  \"obstacles\": [";
  for (std::size_t i = 0; i < problem.obstacles.size(); ++i) {
    out += i == 0 ? "\n    " : ",\n    ";
    out += polygon_text(problem.obstacles[i], "    ");
  }
  out += problem.obstacles.empty() ? "],\n" : "\n  ],\n";
  out += "  \"tags\": " + ordered_json(problem.tags).dump() + "\n}\n";
  return out;
}

std::vector<Problem> load_problem_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::Io, "not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Problem> problems;
  for (const auto& f : files) problems.push_back(load_problem_file(f));
  return problems;
}

}  // namespace pathloop
