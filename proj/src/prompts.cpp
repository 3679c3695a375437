#include "prompts.hpp"

#include <cctype>

#include "errors.hpp"

namespace pathloop {

const char* role_name(Role role) {
  switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

const Problem& worked_example_problem() {
  static const Problem problem = load_problem(R"({
    "name": "Worked example",
    "workspace": [["0", "0"], ["10", "0"], ["10", "10"], ["0", "10"]],
    "initial": [["0", "0"], ["1", "0"], ["1", "1"], ["0", "1"]],
    "goal": [["9", "9"], ["10", "9"], ["10", "10"], ["9", "10"]],
    "obstacles": [[["3", "3"], ["7", "3"], ["7", "7"], ["3", "7"]]],
    "tags": ["example"]
  })");
  return problem;
}

const Path& worked_example_solution() {
  static const Path path = *parse_point_array("[[0.5, 0.5], [8, 2], [9.5, 9.5]]");
  return path;
}

namespace {

std::string polygon_text(const ConvexPolygon& poly) { return format_points(poly.vertices()); }

const char* kTaskDescription =
    "You are solving a 2D path planning problem.\n"
    "\n"
    "A problem consists of a rectangular workspace, an initial set I, a goal set G and a list of "
    "obstacles. Every set is a convex polygon given by its vertices in counter-clockwise order as "
    "[x, y] coordinates.\n"
    "\n"
    "A path is a list of waypoints [[x1, y1], [x2, y2], ..., [xk, yk]]. Consecutive waypoints are "
    "joined by straight line segments. A path is correct when its first waypoint lies in I, its "
    "last waypoint lies in G, and no segment touches or crosses any obstacle. Obstacle boundaries "
    "belong to the obstacle.\n"
    "\n"
    "Explain your thought process step by step. Then write the path on the final line of your "
    "answer as one array of [x, y] pairs with decimal coordinates and nothing else on that line.\n";

const char* kExampleExplanation =
    "The obstacle blocks the straight line from I to G. The path first moves right, passing below "
    "the obstacle, and then climbs along the right side of the obstacle into the goal.";

}  // namespace

std::string describe_problem(const Problem& problem) {
  std::string text;
  text += "Workspace: " + polygon_text(problem.workspace) + "\n";
  text += "Initial set I: " + polygon_text(problem.initial) + "\n";
  text += "Goal set G: " + polygon_text(problem.goal) + "\n";
  text += "Obstacles (" + std::to_string(problem.obstacles.size()) + "):\n";
  for (std::size_t j = 0; j < problem.obstacles.size(); ++j) {
    text += "Obstacle " + std::to_string(j) + ": " + polygon_text(problem.obstacles[j]) + "\n";
  }
  return text;
}

std::vector<ChatMessage> initial_prompt(const Problem& problem, const HintStrategy& strategy) {
  std::string system = kTaskDescription;
  system += "\nExample problem:\n";
  system += describe_problem(worked_example_problem());
  system += "\nExample answer:\n";
  system += kExampleExplanation;
  system += "\n" + format_points(worked_example_solution()) + "\n";

  ChatMessage user{Role::User, "Problem: " + problem.name + "\n" + describe_problem(problem), std::nullopt};
  user.text += "\nFind a correct path from I to G.\n";
  if (strategy.image) {
    user.image = render_image(problem, std::nullopt);
    user.text += "An image of the problem is attached: initial set blue, goal green, obstacles red.\n";
  }
  return {ChatMessage{Role::System, std::move(system), std::nullopt}, std::move(user)};
}

ChatMessage feedback_prompt(const HintBundle& bundle) {
  if (bundle.empty()) throw Error(ErrorCode::EmptyBundle, "feedback needs at least one hint");
  std::string text = "Your path is not correct.\n";
  if (bundle.collision) {
    const auto& c = *bundle.collision;
    text += c.starts_in_initial ? "Your path starts in the initial set I.\n"
                                : "Your path does not start in the initial set I.\n";
    text += c.ends_in_goal ? "Your path ends in the goal set G.\n" : "Your path does not end in the goal set G.\n";
    if (c.colliding_segments.empty()) text += "No segment of your path intersects an obstacle.\n";
    for (const auto& hit : c.colliding_segments) {
      text += "Segment " + std::to_string(hit.segment_index) + " from (" + to_decimal(hit.from.x) + ", " +
              to_decimal(hit.from.y) + ") to (" + to_decimal(hit.to.x) + ", " + to_decimal(hit.to.y) +
              ") intersects obstacle " + std::to_string(hit.obstacle_index) + ".\n";
    }
  }
  if (bundle.free_space) {
    text += "These points are in free space:\n";
    for (const auto& slice : bundle.free_space->slices) {
      text += "Slice x = " + to_decimal(slice.x) + ": " + format_points(slice.safe_points) + "\n";
    }
  }
  if (bundle.prefix) {
    const auto& prefix = bundle.prefix->prefix;
    if (prefix.empty()) {
      text += "No prefix of your path is correct because it does not start in the initial set I.\n";
    } else {
      text += "Your path is correct up to and including waypoint " + std::to_string(prefix.size()) + ": " +
              format_points(prefix) + "\n";
    }
  }
  ChatMessage message{Role::User, std::move(text), std::nullopt};
  if (bundle.image) {
    message.image = bundle.image;
    message.text += "An image of the problem with your last path is attached.\n";
  }
  message.text += "Please provide a corrected path. Write it on the final line as an array of [x, y] pairs.\n";
  return message;
}

ChatMessage syntax_reminder() {
  return {Role::User,
          "I could not find a path in your answer. Please answer in the required syntax: the final "
          "line must be one array of [x, y] pairs, for example [[0.5, 0.5], [8, 2], [9.5, 9.5]].\n",
          std::nullopt};
}

ChatMessage retry_without_hints() {
  return {Role::User,
          "Your path is not correct. Please try again and write the path on the final line as an "
          "array of [x, y] pairs.\n",
          std::nullopt};
}

namespace {

class Scanner {
 public:
  Scanner(std::string_view text, std::size_t pos) : text_(text), pos_(pos) {}

  std::size_t pos() const { return pos_; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  // [+-]? (digits [. digits*] | . digits)
  std::optional<std::string_view> number() {
    skip_ws();
    const std::size_t start = pos_;
    std::size_t p = pos_;
    if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
    std::size_t digits = 0;
    while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) ++p, ++digits;
    if (p < text_.size() && text_[p] == '.') {
      ++p;
      while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) ++p, ++digits;
    }
    if (digits == 0) return std::nullopt;
    pos_ = p;
    return text_.substr(start, p - start);
  }

 private:
  std::string_view text_;
  std::size_t pos_;
};

enum class ArrayParse { Ok, NotAnArray, Malformed };

// Parses "[ [n, n] (, [n, n])* ]" starting at `pos`; an empty array is
// accepted only when `allow_empty`.
ArrayParse parse_pairs_at(std::string_view text, std::size_t pos, bool allow_empty, std::vector<Point>& out,
                          std::size_t& end) {
  Scanner s(text, pos);
  if (!s.eat('[')) return ArrayParse::NotAnArray;
  out.clear();
  if (s.eat(']')) {
    end = s.pos();
    return allow_empty ? ArrayParse::Ok : ArrayParse::NotAnArray;
  }
  if (!s.peek('[')) return ArrayParse::NotAnArray;
  for (;;) {
    if (!s.eat('[')) return ArrayParse::Malformed;
    auto x = s.number();
    if (!x || !s.eat(',')) return ArrayParse::Malformed;
    auto y = s.number();
    if (!y || !s.eat(']')) return ArrayParse::Malformed;
    try {
      out.push_back({parse_decimal(*x), parse_decimal(*y)});
    } catch (const Error&) {
      return ArrayParse::Malformed;
    }
    if (s.eat(',')) {
      if (s.eat(']')) break;  // trailing comma
      continue;
    }
    if (s.eat(']')) break;
    return ArrayParse::Malformed;
  }
  end = s.pos();
  return ArrayParse::Ok;
}

}  // namespace

ParsedResponse parse_response(std::string_view raw) {
  std::optional<std::vector<Point>> last;
  bool malformed = false;
  std::vector<Point> pts;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != '[') continue;
    std::size_t end = 0;
    switch (parse_pairs_at(raw, i, false, pts, end)) {
      case ArrayParse::Ok:
        last = pts;
        i = end - 1;
        break;
      case ArrayParse::Malformed:
        malformed = true;
        break;
      case ArrayParse::NotAnArray:
        break;
    }
  }
  if (last) return {std::move(*last), std::string(raw)};
  if (malformed) throw Error(ErrorCode::MalformedPair, "found an array whose entries are not numeric [x, y] pairs");
  throw Error(ErrorCode::NoPathFound, "no array of [x, y] pairs in the response");
}

std::optional<std::vector<Point>> parse_point_array(std::string_view text) {
  std::size_t begin = 0;
  while (begin < text.size() && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  std::vector<Point> pts;
  std::size_t end = 0;
  if (parse_pairs_at(text, begin, true, pts, end) != ArrayParse::Ok) return std::nullopt;
  while (end < text.size() && std::isspace(static_cast<unsigned char>(text[end]))) ++end;
  if (end != text.size()) return std::nullopt;
  return pts;
}

std::string render_prompt_text(const std::vector<ChatMessage>& messages) {
  std::string out;
  for (const auto& m : messages) {
    if (!out.empty()) out += "\n";
    out += m.text;
  }
  return out;
}

}  // namespace pathloop
