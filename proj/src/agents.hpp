#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "providers.hpp"

namespace pathloop {

class Agent {
 public:
  virtual ~Agent() = default;
  /// Returns the assistant reply to the conversation so far.
  virtual std::string respond(const std::vector<ChatMessage>& messages) = 0;
};

/// Creates a fresh agent for one run; `run_seed` is derived from the
/// experiment seed, problem index and repeat index.
using AgentFactory = std::function<std::unique_ptr<Agent>(std::uint64_t run_seed)>;

/// Deterministic test double. Policies:
///   echo-fixed-path[=<array>]  always answers the given path, or the
///                              straight I-center -> G-center path
///   echo-oracle                answers the oracle path for the prompted problem
///   follow-free-space          I-center -> nearest free-space point per slice
///                              left to right -> G-center, replanned from the
///                              latest correct prefix
///   random-walk[=<seed>]       random interior waypoints between the centers
///   replay=<json strings>      answers the given replies in order, then fails
/// Policies read the problem and hints only from the message text.
std::unique_ptr<Agent> scripted_agent(const std::string& policy, std::uint64_t run_seed = 0);

/// Answers `replies` in order; a further call throws Error{Provider}.
std::unique_ptr<Agent> queued_agent(std::vector<std::string> replies);

/// Throws Error{InvalidArgument} for an unknown policy name.
void validate_scripted_policy(const std::string& policy);

/// Agent backed by complete() against a live provider.
std::unique_ptr<Agent> provider_agent(const AgentConfig& config, std::shared_ptr<HttpTransport> transport);

AgentFactory make_agent_factory(const AgentConfig& config,
                                std::shared_ptr<HttpTransport> transport = default_transport());

/// Deterministic 64-bit mixing used for per-run seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace pathloop
