#include "providers.hpp"

#include <openssl/evp.h>

#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "errors.hpp"

namespace pathloop {

using nlohmann::json;

const char* provider_name(Provider provider) {
  switch (provider) {
    case Provider::Gemini: return "gemini";
    case Provider::Gpt4o: return "gpt4o";
    case Provider::Claude: return "claude";
    case Provider::Scripted: return "scripted";
  }
  return "scripted";
}

Provider provider_from_name(const std::string& name) {
  if (name == "gemini") return Provider::Gemini;
  if (name == "gpt4o" || name == "openai") return Provider::Gpt4o;
  if (name == "claude" || name == "anthropic") return Provider::Claude;
  if (name == "scripted") return Provider::Scripted;
  throw Error(ErrorCode::InvalidArgument, "unknown provider '" + name + "'");
}

AgentConfig agent_config_from_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size()) {
    throw Error(ErrorCode::InvalidArgument, "agent must be written provider:model, got '" + spec + "'");
  }
  AgentConfig config;
  config.provider = provider_from_name(spec.substr(0, colon));
  config.model_id = spec.substr(colon + 1);
  return config;
}

std::string credential_variable(Provider provider) {
  switch (provider) {
    case Provider::Gemini: return "GEMINI_API_KEY";
    case Provider::Gpt4o: return "OPENAI_API_KEY";
    case Provider::Claude: return "ANTHROPIC_API_KEY";
    case Provider::Scripted: return "";
  }
  return "";
}

std::string require_credential(Provider provider) {
  const std::string var = credential_variable(provider);
  if (var.empty()) return "";
  const char* value = std::getenv(var.c_str());
  if (value == nullptr || *value == '\0') {
    throw Error(ErrorCode::Auth, var + " is not set for provider " + provider_name(provider));
  }
  return value;
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

RateLimiter::RateLimiter(double requests_per_minute)
    : capacity_(std::max(1.0, requests_per_minute / 60.0)),
      tokens_(capacity_),
      refill_per_second_(requests_per_minute / 60.0),
      last_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
  if (refill_per_second_ <= 0) return;
  std::unique_lock lock(mutex_);
  for (;;) {
    const auto now = std::chrono::steady_clock::now();
    const double elapsed = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    tokens_ = std::min(capacity_, tokens_ + elapsed * refill_per_second_);
    if (tokens_ >= 1.0) {
      tokens_ -= 1.0;
      return;
    }
    const double wait = (1.0 - tokens_) / refill_per_second_;
    lock.unlock();
    std::this_thread::sleep_for(std::chrono::duration<double>(wait));
    lock.lock();
  }
}

RateLimiter& RateLimiter::for_provider(Provider provider, double requests_per_minute) {
  static std::mutex registry_mutex;
  static std::map<std::pair<Provider, double>, std::unique_ptr<RateLimiter>> registry;
  std::lock_guard lock(registry_mutex);
  auto& slot = registry[{provider, requests_per_minute}];
  if (!slot) slot = std::make_unique<RateLimiter>(requests_per_minute);
  return *slot;
}

namespace {

json openai_content(const ChatMessage& m) {
  if (!m.image) return m.text;
  return json::array({{{"type", "text"}, {"text", m.text}},
                      {{"type", "image_url"},
                       {"image_url", {{"url", "data:image/png;base64," + base64_encode(m.image->png)}}}}});
}

json anthropic_content(const ChatMessage& m) {
  json parts = json::array({{{"type", "text"}, {"text", m.text}}});
  if (m.image) {
    parts.push_back({{"type", "image"},
                     {"source", {{"type", "base64"}, {"media_type", "image/png"}, {"data", base64_encode(m.image->png)}}}});
  }
  return parts;
}

json gemini_parts(const ChatMessage& m) {
  json parts = json::array({{{"text", m.text}}});
  if (m.image) {
    parts.push_back({{"inline_data", {{"mime_type", "image/png"}, {"data", base64_encode(m.image->png)}}}});
  }
  return parts;
}

std::string excerpt(const std::string& body) { return body.size() > 300 ? body.substr(0, 300) + "..." : body; }

}  // namespace

HttpRequest build_request(const AgentConfig& config, const std::vector<ChatMessage>& messages,
                          const std::string& credential) {
  HttpRequest request;
  request.timeout_seconds = config.timeout_seconds;
  request.headers["Content-Type"] = "application/json";
  json body;
  switch (config.provider) {
    case Provider::Gpt4o: {
      request.url = "https://api.openai.com/v1/chat/completions";
      request.headers["Authorization"] = "Bearer " + credential;
      body["model"] = config.model_id;
      body["messages"] = json::array();
      for (const auto& m : messages) body["messages"].push_back({{"role", role_name(m.role)}, {"content", openai_content(m)}});
      if (config.temperature) body["temperature"] = *config.temperature;
      break;
    }
    case Provider::Claude: {
      request.url = "https://api.anthropic.com/v1/messages";
      request.headers["x-api-key"] = credential;
      request.headers["anthropic-version"] = "2023-06-01";
      body["model"] = config.model_id;
      body["max_tokens"] = 4096;
      std::string system;
      body["messages"] = json::array();
      for (const auto& m : messages) {
        if (m.role == Role::System) {
          system += (system.empty() ? "" : "\n") + m.text;
          continue;
        }
        body["messages"].push_back({{"role", role_name(m.role)}, {"content", anthropic_content(m)}});
      }
      if (!system.empty()) body["system"] = system;
      if (config.temperature) body["temperature"] = *config.temperature;
      break;
    }
    case Provider::Gemini: {
      request.url = "https://generativelanguage.googleapis.com/v1beta/models/" + config.model_id + ":generateContent";
      request.headers["x-goog-api-key"] = credential;
      std::string system;
      body["contents"] = json::array();
      for (const auto& m : messages) {
        if (m.role == Role::System) {
          system += (system.empty() ? "" : "\n") + m.text;
          continue;
        }
        body["contents"].push_back({{"role", m.role == Role::Assistant ? "model" : "user"}, {"parts", gemini_parts(m)}});
      }
      if (!system.empty()) body["systemInstruction"] = {{"parts", json::array({{{"text", system}}})}};
      if (config.temperature) body["generationConfig"] = {{"temperature", *config.temperature}};
      break;
    }
    case Provider::Scripted:
      throw Error(ErrorCode::InvalidArgument, "scripted agents do not issue HTTP requests");
  }
  request.body = body.dump();
  return request;
}

std::string extract_text(Provider provider, const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
    std::string text;
    switch (provider) {
      case Provider::Gpt4o:
        return doc.at("choices").at(0).at("message").at("content").get<std::string>();
      case Provider::Claude:
        for (const auto& part : doc.at("content")) {
          if (part.value("type", "") == "text") text += part.at("text").get<std::string>();
        }
        return text;
      case Provider::Gemini:
        for (const auto& part : doc.at("candidates").at(0).at("content").at("parts")) {
          if (part.contains("text")) text += part.at("text").get<std::string>();
        }
        return text;
      case Provider::Scripted:
        break;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Provider, std::string("unexpected response shape: ") + e.what() + ": " + excerpt(body));
  }
  throw Error(ErrorCode::InvalidArgument, "scripted agents have no response body");
}

namespace {

class HttplibTransport : public HttpTransport {
 public:
  HttpResponse post(const HttpRequest& request) override {
    // Split "https://host/path?query" into scheme+host and path.
    const auto scheme_end = request.url.find("://");
    const auto path_start = request.url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    const std::string origin = request.url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : request.url.substr(path_start);

    httplib::Client client(origin);
    const auto seconds = static_cast<time_t>(request.timeout_seconds);
    const auto usec = static_cast<time_t>((request.timeout_seconds - static_cast<double>(seconds)) * 1e6);
    client.set_connection_timeout(seconds, usec);
    client.set_read_timeout(seconds, usec);
    client.set_write_timeout(seconds, usec);
    httplib::Headers headers;
    std::string content_type = "application/json";
    for (const auto& [k, v] : request.headers) {
      if (k == "Content-Type") {
        content_type = v;
        continue;
      }
      headers.emplace(k, v);
    }
    auto result = client.Post(path, headers, request.body, content_type);
    HttpResponse response;
    if (!result) {
      const auto err = result.error();
      response.transport = err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read
                               ? HttpResponse::Transport::TimedOut
                               : HttpResponse::Transport::Failed;
      response.error = httplib::to_string(err);
      return response;
    }
    response.status = result->status;
    response.body = result->body;
    return response;
  }
};

}  // namespace

std::shared_ptr<HttpTransport> default_transport() { return std::make_shared<HttplibTransport>(); }

std::string complete(const AgentConfig& config, const std::vector<ChatMessage>& messages, HttpTransport& transport,
                     const SleepFn& sleep) {
  if (config.timeout_seconds <= 0) throw Error(ErrorCode::InvalidArgument, "timeout must be positive");
  const std::string credential = require_credential(config.provider);
  const HttpRequest request = build_request(config, messages, credential);
  RateLimiter& limiter = RateLimiter::for_provider(config.provider, config.requests_per_minute);

  auto delay = config.initial_backoff;
  for (std::uint32_t attempt = 0;; ++attempt) {
    limiter.acquire();
    const HttpResponse response = transport.post(request);
    ErrorCode failure;
    std::string detail;
    if (response.transport == HttpResponse::Transport::TimedOut) {
      failure = ErrorCode::Timeout;
      detail = "request timed out: " + response.error;
    } else if (response.transport == HttpResponse::Transport::Failed) {
      failure = ErrorCode::Provider;
      detail = "transport failure: " + response.error;
    } else if (response.status >= 200 && response.status < 300) {
      return extract_text(config.provider, response.body);
    } else if (response.status == 401 || response.status == 403) {
      throw Error(ErrorCode::Auth, "provider rejected credentials (HTTP " + std::to_string(response.status) +
                                       "): " + excerpt(response.body));
    } else if (response.status == 429) {
      failure = ErrorCode::RateLimited;
      detail = "rate limited (HTTP 429): " + excerpt(response.body);
    } else if (response.status >= 500) {
      failure = ErrorCode::Provider;
      detail = "HTTP " + std::to_string(response.status) + ": " + excerpt(response.body);
    } else {
      throw Error(ErrorCode::Provider, "HTTP " + std::to_string(response.status) + ": " + excerpt(response.body));
    }
    if (attempt >= config.max_retries) throw Error(failure, detail);
    if (sleep) {
      sleep(delay);
    } else {
      std::this_thread::sleep_for(delay);
    }
    delay = std::chrono::milliseconds(static_cast<long>(static_cast<double>(delay.count()) * config.backoff_factor));
  }
}

}  // namespace pathloop
