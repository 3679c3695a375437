#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "prompts.hpp"

namespace pathloop {

enum class Provider { Gemini, Gpt4o, Claude, Scripted };

const char* provider_name(Provider provider);
/// Accepts "gemini", "gpt4o", "claude" and "scripted".
Provider provider_from_name(const std::string& name);

struct AgentConfig {
  Provider provider = Provider::Scripted;
  /// Provider model id, or the policy name for scripted agents.
  std::string model_id;
  /// Unset means the provider default is used and the field is omitted.
  std::optional<double> temperature;
  double timeout_seconds = 120;
  std::uint32_t max_retries = 3;
  /// Requests per minute allowed per provider across all workers; 0 disables.
  double requests_per_minute = 0;
  std::chrono::milliseconds initial_backoff{1000};
  double backoff_factor = 2.0;

  std::string summary() const { return std::string(provider_name(provider)) + ":" + model_id; }
};

/// Parses "provider:model".
AgentConfig agent_config_from_spec(const std::string& spec);

/// Name of the environment variable holding the provider credential, or an
/// empty string for the scripted provider.
std::string credential_variable(Provider provider);

/// Throws Error{Auth} when the credential variable is missing or empty.
std::string require_credential(Provider provider);

struct HttpRequest {
  std::string url;
  std::map<std::string, std::string> headers;
  std::string body;
  double timeout_seconds = 120;
};

struct HttpResponse {
  enum class Transport { Ok, Failed, TimedOut };
  Transport transport = Transport::Ok;
  int status = 0;
  std::string body;
  std::string error;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse post(const HttpRequest& request) = 0;
};

/// cpp-httplib backed HTTPS transport.
std::shared_ptr<HttpTransport> default_transport();

/// Token bucket shared by every caller of the same provider.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_minute);
  void acquire();

  static RateLimiter& for_provider(Provider provider, double requests_per_minute);

 private:
  std::mutex mutex_;
  double capacity_;
  double tokens_;
  double refill_per_second_;
  std::chrono::steady_clock::time_point last_;
};

/// Builds the provider-specific request for a conversation.
HttpRequest build_request(const AgentConfig& config, const std::vector<ChatMessage>& messages,
                          const std::string& credential);

/// Extracts the assistant text from a provider response body.
std::string extract_text(Provider provider, const std::string& body);

using SleepFn = std::function<void(std::chrono::milliseconds)>;

/// One chat completion. Transient failures (transport errors, 429, 5xx) are
/// retried with exponential backoff up to config.max_retries times.
/// Throws Error{Auth|RateLimited|Timeout|Provider}.
std::string complete(const AgentConfig& config, const std::vector<ChatMessage>& messages,
                     HttpTransport& transport, const SleepFn& sleep = {});

std::string base64_encode(const std::vector<std::uint8_t>& bytes);

}  // namespace pathloop
