#include <doctest.h>

#include <cstdlib>
#include <deque>

#include "helpers.hpp"
#include "providers.hpp"

using namespace testing;

namespace {

struct FakeTransport : HttpTransport {
  std::deque<HttpResponse> queue;
  std::vector<HttpRequest> seen;

  HttpResponse post(const HttpRequest& request) override {
    seen.push_back(request);
    HttpResponse r = queue.front();
    queue.pop_front();
    return r;
  }
};

HttpResponse ok(const std::string& body) { return {HttpResponse::Transport::Ok, 200, body, ""}; }
HttpResponse status(int code) { return {HttpResponse::Transport::Ok, code, "{\"error\":\"x\"}", ""}; }
HttpResponse dropped() { return {HttpResponse::Transport::Failed, 0, "", "connection reset"}; }

const char* kOpenAiReply = R"({"choices":[{"message":{"role":"assistant","content":"R"}}]})";

struct EnvGuard {
  std::string name;
  explicit EnvGuard(std::string n, const char* value) : name(std::move(n)) {
    if (value) setenv(name.c_str(), value, 1);
    else unsetenv(name.c_str());
  }
  ~EnvGuard() { unsetenv(name.c_str()); }
};

AgentConfig gpt() {
  AgentConfig c;
  c.provider = Provider::Gpt4o;
  c.model_id = "gpt-4o";
  return c;
}

std::vector<ChatMessage> conversation(bool with_image = false) {
  std::vector<ChatMessage> msgs{{Role::System, "sys", std::nullopt}, {Role::User, "hello", std::nullopt}};
  if (with_image) msgs[1].image = ImageHint{{1, 2, 3}, 1, 1};
  return msgs;
}

}  // namespace

TEST_CASE("agent specs") {
  const auto c = agent_config_from_spec("claude:claude-model");
  CHECK(c.provider == Provider::Claude);
  CHECK(c.model_id == "claude-model");
  CHECK(c.summary() == "claude:claude-model");
  CHECK(agent_config_from_spec("scripted:follow-free-space").provider == Provider::Scripted);
  CHECK(code_of([] { agent_config_from_spec("nocolon"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { agent_config_from_spec("other:model"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("request shapes") {
  SUBCASE("chat completions") {
    auto c = gpt();
    const auto r = build_request(c, conversation(true), "key");
    const auto body = nlohmann::json::parse(r.body);
    CHECK(r.headers.at("Authorization") == "Bearer key");
    CHECK(body.at("model") == "gpt-4o");
    CHECK_FALSE(body.contains("temperature"));
    CHECK(body.at("messages").size() == 2);
    CHECK(body.dump().find("data:image/png;base64,AQID") != std::string::npos);
    c.temperature = 0.5;
    CHECK(nlohmann::json::parse(build_request(c, conversation(), "key").body).at("temperature") == 0.5);
  }
  SUBCASE("messages API") {
    AgentConfig c;
    c.provider = Provider::Claude;
    c.model_id = "m";
    const auto r = build_request(c, conversation(true), "key");
    const auto body = nlohmann::json::parse(r.body);
    CHECK(r.headers.at("x-api-key") == "key");
    CHECK(body.at("system") == "sys");
    CHECK(body.at("messages").size() == 1);
    CHECK(body.dump().find("AQID") != std::string::npos);
  }
  SUBCASE("generateContent") {
    AgentConfig c;
    c.provider = Provider::Gemini;
    c.model_id = "g";
    const auto r = build_request(c, conversation(true), "key");
    const auto body = nlohmann::json::parse(r.body);
    CHECK(r.url.find("g:generateContent") != std::string::npos);
    CHECK(body.contains("systemInstruction"));
    CHECK(body.dump().find("AQID") != std::string::npos);
  }
}

TEST_CASE("response extraction") {
  CHECK(extract_text(Provider::Gpt4o, kOpenAiReply) == "R");
  CHECK(extract_text(Provider::Claude, R"({"content":[{"type":"text","text":"a"},{"type":"text","text":"b"}]})") == "ab");
  CHECK(extract_text(Provider::Gemini, R"({"candidates":[{"content":{"parts":[{"text":"g"}]}}]})") == "g");
  CHECK(code_of([] { extract_text(Provider::Gpt4o, "{}"); }) == ErrorCode::Provider);
}

TEST_CASE("completion with retries") {
  EnvGuard key("OPENAI_API_KEY", "secret");
  std::vector<long> sleeps;
  const SleepFn record = [&](std::chrono::milliseconds d) { sleeps.push_back(d.count()); };

  SUBCASE("two transport failures then success") {
    FakeTransport t;
    t.queue = {dropped(), status(503), ok(kOpenAiReply)};
    auto c = gpt();
    c.max_retries = 3;
    CHECK(complete(c, conversation(), t, record) == "R");
    CHECK(t.seen.size() == 3);
    CHECK(sleeps == std::vector<long>{1000, 2000});
  }
  SUBCASE("rate limited after retries") {
    FakeTransport t;
    t.queue = {status(429), status(429), status(429)};
    auto c = gpt();
    c.max_retries = 2;
    CHECK(code_of([&] { complete(c, conversation(), t, record); }) == ErrorCode::RateLimited);
    CHECK(t.seen.size() == 3);
  }
  SUBCASE("timeouts") {
    FakeTransport t;
    t.queue = {{HttpResponse::Transport::TimedOut, 0, "", "timeout"}};
    auto c = gpt();
    c.max_retries = 0;
    CHECK(code_of([&] { complete(c, conversation(), t, record); }) == ErrorCode::Timeout);
  }
  SUBCASE("rejected credentials are not retried") {
    FakeTransport t;
    t.queue = {status(401)};
    CHECK(code_of([&] { complete(gpt(), conversation(), t, record); }) == ErrorCode::Auth);
    CHECK(t.seen.size() == 1);
  }
  SUBCASE("client errors surface as provider errors") {
    FakeTransport t;
    t.queue = {status(400)};
    CHECK(code_of([&] { complete(gpt(), conversation(), t, record); }) == ErrorCode::Provider);
  }
}

TEST_CASE("missing credential") {
  EnvGuard key("OPENAI_API_KEY", nullptr);
  FakeTransport t;
  CHECK(code_of([&] { complete(gpt(), conversation(), t); }) == ErrorCode::Auth);
  CHECK(t.seen.empty());
  CHECK(credential_variable(Provider::Gemini) == "GEMINI_API_KEY");
  CHECK(credential_variable(Provider::Claude) == "ANTHROPIC_API_KEY");
}

TEST_CASE("base64") {
  auto enc = [](const std::string& s) { return base64_encode(std::vector<std::uint8_t>(s.begin(), s.end())); };
  CHECK(enc("") == "");
  CHECK(enc("f") == "Zg==");
  CHECK(enc("foobar") == "Zm9vYmFy");
}

TEST_CASE("rate limiter paces bursts") {
  RateLimiter limiter(600);  // one token every 100 ms after the initial burst
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 12; ++i) limiter.acquire();
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(5));
}
