#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hints.hpp"

namespace pathloop {

enum class Role { System, User, Assistant };

const char* role_name(Role role);

struct ChatMessage {
  Role role = Role::User;
  std::string text;
  /// Only user messages carry images.
  std::optional<ImageHint> image;
};

struct ParsedResponse {
  Path waypoints;
  std::string raw_text;
};

/// Fixed one-obstacle problem with its three-waypoint solution, quoted in
/// every initial prompt.
const Problem& worked_example_problem();
const Path& worked_example_solution();

/// System message (task, answer syntax, worked example) followed by the user
/// message enumerating the problem. Attaches a render when the strategy
/// enables image hints.
std::vector<ChatMessage> initial_prompt(const Problem& problem, const HintStrategy& strategy);

/// Verbalizes every hint present in the bundle. Throws Error{EmptyBundle}.
ChatMessage feedback_prompt(const HintBundle& bundle);

/// Sent when a response carried no parseable path.
ChatMessage syntax_reminder();

/// Sent after an incorrect path when no hints are enabled.
ChatMessage retry_without_hints();

/// Extracts the last well-formed array of [x, y] pairs from free text.
/// Throws Error{NoPathFound} or Error{MalformedPair}.
ParsedResponse parse_response(std::string_view raw);

/// Parses text that must consist of exactly one (possibly empty) point array.
std::optional<std::vector<Point>> parse_point_array(std::string_view text);

/// All message texts joined by blank lines.
std::string render_prompt_text(const std::vector<ChatMessage>& messages);

/// Problem enumeration used in prompts: workspace, I, G and obstacles.
std::string describe_problem(const Problem& problem);

}  // namespace pathloop
