#include "agents.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "errors.hpp"
#include "oracle.hpp"
#include "random.hpp"

namespace pathloop {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over the combined value.
  std::uint64_t z = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

std::vector<Point> points_after(const std::string& line, const std::string& label) {
  auto pts = parse_point_array(std::string_view(line).substr(label.size()));
  if (!pts) throw Error(ErrorCode::Parse, "cannot read points from prompt line: " + line);
  return *pts;
}

// Rebuilds the problem from the enumeration in the first user message.
Problem problem_from_prompt(const std::vector<ChatMessage>& messages) {
  const auto first_user = std::find_if(messages.begin(), messages.end(),
                                       [](const ChatMessage& m) { return m.role == Role::User; });
  if (first_user == messages.end()) throw Error(ErrorCode::Parse, "conversation has no user message");
  std::string name = "prompted";
  std::optional<ConvexPolygon> workspace, initial, goal;
  std::vector<ConvexPolygon> obstacles;
  for (const auto& line : lines_of(first_user->text)) {
    if (starts_with(line, "Problem: ")) name = line.substr(9);
    else if (starts_with(line, "Workspace: ")) workspace.emplace(points_after(line, "Workspace: "));
    else if (starts_with(line, "Initial set I: ")) initial.emplace(points_after(line, "Initial set I: "));
    else if (starts_with(line, "Goal set G: ")) goal.emplace(points_after(line, "Goal set G: "));
    else if (starts_with(line, "Obstacle ")) {
      const auto colon = line.find(": ");
      if (colon != std::string::npos) obstacles.emplace_back(points_after(line, line.substr(0, colon + 2)));
    }
  }
  if (!workspace || !initial || !goal) throw Error(ErrorCode::Parse, "prompt does not describe a problem");
  return Problem{name, *workspace, *initial, *goal, std::move(obstacles), {}};
}

std::string answer(const std::string& reasoning, const Path& path) {
  return reasoning + "\n" + format_points(path);
}

std::size_t assistant_turns(const std::vector<ChatMessage>& messages) {
  return static_cast<std::size_t>(std::count_if(messages.begin(), messages.end(),
                                                [](const ChatMessage& m) { return m.role == Role::Assistant; }));
}

class EchoFixedPath : public Agent {
 public:
  explicit EchoFixedPath(std::optional<Path> path) : path_(std::move(path)) {}

  std::string respond(const std::vector<ChatMessage>& messages) override {
    if (!path_) {
      const Problem problem = problem_from_prompt(messages);
      path_ = Path{problem.initial.center(), problem.goal.center()};
    }
    return answer("Here is my path.", *path_);
  }

 private:
  std::optional<Path> path_;
};

class EchoOracle : public Agent {
 public:
  std::string respond(const std::vector<ChatMessage>& messages) override {
    const OracleResult result = plan(problem_from_prompt(messages));
    if (!result.solvable) return "I believe this problem has no solution.";
    return answer("Here is a path around the obstacles.", *result.path);
  }
};

class RandomWalk : public Agent {
 public:
  explicit RandomWalk(std::uint64_t seed) : engine_(seed) {}

  std::string respond(const std::vector<ChatMessage>& messages) override {
    const Problem problem = problem_from_prompt(messages);
    const Box& box = problem.workspace.bounds();
    auto milli = [](const Rational& v, bool up) {
      const Rational scaled = v * 1000;
      mpz_class out;
      if (up) mpz_cdiv_q(out.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
      else mpz_fdiv_q(out.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
      return out.get_si();
    };
    const long x0 = milli(box.min_x, true), x1 = milli(box.max_x, false);
    const long y0 = milli(box.min_y, true), y1 = milli(box.max_y, false);
    Path path{problem.initial.center()};
    const auto count = 1 + uniform_below(engine_, 4);
    for (std::uint64_t i = 0; i < count; ++i) {
      path.push_back({Rational(uniform_between(engine_, x0, x1), 1000), Rational(uniform_between(engine_, y0, y1), 1000)});
      path.back().x.canonicalize();
      path.back().y.canonicalize();
    }
    path.push_back(problem.goal.center());
    return answer("Trying a random route.", path);
  }

 private:
  Engine engine_;
};

struct Slice {
  Rational x;
  std::vector<Point> points;
};

Rational dist2(const Point& a, const Point& b) {
  const Rational dx = a.x - b.x;
  const Rational dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// Points sorted by distance to `from`, ties broken lexicographically.
std::vector<Point> by_distance(std::vector<Point> pts, const Point& from) {
  std::sort(pts.begin(), pts.end(), [&](const Point& a, const Point& b) {
    const Rational da = dist2(a, from);
    const Rational db = dist2(b, from);
    return da < db || (da == db && a < b);
  });
  return pts;
}

class FollowFreeSpace : public Agent {
 public:
  std::string respond(const std::vector<ChatMessage>& messages) override {
    if (!problem_) problem_ = problem_from_prompt(messages);
    const Point start = problem_->initial.center();
    const Point goal = problem_->goal.center();
    if (assistant_turns(messages) == 0) return answer("Trying the straight line first.", {start, goal});

    std::vector<Slice> slices;
    std::optional<Path> prefix;
    // Hints are read from the most recent feedback that carries them.
    for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
      if (it->role != Role::User) continue;
      const bool fresh = slices.empty();
      for (const auto& line : lines_of(it->text)) {
        if (fresh && starts_with(line, "Slice x = ")) {
          const auto colon = line.find(": ");
          auto pts = parse_point_array(std::string_view(line).substr(colon + 2));
          if (pts) slices.push_back({parse_decimal(line.substr(10, colon - 10)), *pts});
        } else if (!prefix && starts_with(line, "Your path is correct up to and including waypoint ")) {
          prefix = points_after(line, line.substr(0, line.find(": ") + 2));
        } else if (!prefix && starts_with(line, "No prefix of your path is correct")) {
          prefix = Path{};
        }
      }
      if (!slices.empty()) break;
    }

    Path path = prefix && !prefix->empty() ? *prefix : Path{start};
    const std::string key = format_points(path);
    const std::size_t attempt = attempts_[key]++;
    const Point cur = path.back();

    std::vector<const Slice*> ahead;
    for (const auto& s : slices) {
      if (s.x > cur.x && !s.points.empty()) ahead.push_back(&s);
    }

    // First hop: cycle through candidate targets, each tried directly and via
    // the two axis-aligned corners.
    const std::size_t mode = attempt % 3;
    Point target = goal;
    std::size_t next_slice = 0;
    if (!ahead.empty()) {
      const auto candidates = by_distance(ahead.front()->points, cur);
      target = candidates[(attempt / 3) % candidates.size()];
      next_slice = 1;
    }
    if (mode == 1) {
      const Point corner{target.x, cur.y};
      if (!(corner == cur) && !(corner == target)) path.push_back(corner);
    } else if (mode == 2) {
      const Point corner{cur.x, target.y};
      if (!(corner == cur) && !(corner == target)) path.push_back(corner);
    }
    if (!(target == path.back())) path.push_back(target);
    if (!ahead.empty()) {
      for (std::size_t i = next_slice; i < ahead.size(); ++i) {
        path.push_back(by_distance(ahead[i]->points, path.back()).front());
      }
      if (!(goal == path.back())) path.push_back(goal);
    }
    return answer("Keeping the correct part and following the free-space points.", path);
  }

 private:
  std::optional<Problem> problem_;
  std::map<std::string, std::size_t> attempts_;
};

class Replay : public Agent {
 public:
  explicit Replay(std::vector<std::string> replies) : replies_(std::move(replies)) {}

  std::string respond(const std::vector<ChatMessage>&) override {
    if (next_ >= replies_.size()) throw Error(ErrorCode::Provider, "scripted replies exhausted");
    return replies_[next_++];
  }

 private:
  std::vector<std::string> replies_;
  std::size_t next_ = 0;
};

std::vector<std::string> replay_script(const std::string& arg) {
  try {
    const auto doc = nlohmann::json::parse(arg);
    auto replies = doc.get<std::vector<std::string>>();
    if (replies.empty()) throw Error(ErrorCode::InvalidArgument, "replay needs at least one reply");
    return replies;
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::InvalidArgument, "replay expects a JSON array of strings");
  }
}

class ProviderAgent : public Agent {
 public:
  ProviderAgent(AgentConfig config, std::shared_ptr<HttpTransport> transport)
      : config_(std::move(config)), transport_(std::move(transport)) {}

  std::string respond(const std::vector<ChatMessage>& messages) override {
    return complete(config_, messages, *transport_);
  }

 private:
  AgentConfig config_;
  std::shared_ptr<HttpTransport> transport_;
};

std::pair<std::string, std::string> split_policy(const std::string& policy) {
  const auto eq = policy.find('=');
  if (eq == std::string::npos) return {policy, ""};
  return {policy.substr(0, eq), policy.substr(eq + 1)};
}

}  // namespace

void validate_scripted_policy(const std::string& policy) {
  const auto [name, arg] = split_policy(policy);
  if (name == "echo-fixed-path") {
    if (!arg.empty() && (!parse_point_array(arg) || parse_point_array(arg)->empty())) {
      throw Error(ErrorCode::InvalidArgument, "echo-fixed-path expects a [[x, y], ...] array");
    }
    return;
  }
  if (name == "random-walk") {
    if (!arg.empty() && arg.find_first_not_of("0123456789") != std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "random-walk seed must be a non-negative integer");
    }
    return;
  }
  if (name == "replay") {
    replay_script(arg);
    return;
  }
  if (name == "follow-free-space" || name == "echo-oracle") {
    if (!arg.empty()) throw Error(ErrorCode::InvalidArgument, name + " takes no argument");
    return;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown scripted policy '" + policy + "'");
}

std::unique_ptr<Agent> scripted_agent(const std::string& policy, std::uint64_t run_seed) {
  validate_scripted_policy(policy);
  const auto [name, arg] = split_policy(policy);
  if (name == "echo-fixed-path") {
    return std::make_unique<EchoFixedPath>(arg.empty() ? std::nullopt : parse_point_array(arg));
  }
  if (name == "echo-oracle") return std::make_unique<EchoOracle>();
  if (name == "replay") return queued_agent(replay_script(arg));
  if (name == "follow-free-space") return std::make_unique<FollowFreeSpace>();
  return std::make_unique<RandomWalk>(arg.empty() ? run_seed : std::stoull(arg));
}

std::unique_ptr<Agent> queued_agent(std::vector<std::string> replies) {
  return std::make_unique<Replay>(std::move(replies));
}

std::unique_ptr<Agent> provider_agent(const AgentConfig& config, std::shared_ptr<HttpTransport> transport) {
  return std::make_unique<ProviderAgent>(config, std::move(transport));
}

AgentFactory make_agent_factory(const AgentConfig& config, std::shared_ptr<HttpTransport> transport) {
  if (config.provider == Provider::Scripted) {
    validate_scripted_policy(config.model_id);
    return [policy = config.model_id](std::uint64_t seed) { return scripted_agent(policy, seed); };
  }
  return [config, transport](std::uint64_t) { return provider_agent(config, transport); };
}

}  // namespace pathloop
