#include <doctest.h>

#include "agents.hpp"
#include "helpers.hpp"
#include "loop.hpp"
#include "suite.hpp"

using namespace testing;

TEST_CASE("scripted policies") {
  SUBCASE("follow-free-space solves an open problem at once") {
    auto agent = scripted_agent("follow-free-space");
    const auto rec = run_single(open_problem(), HintStrategy::CFP(), *agent, 20);
    CHECK(rec.success);
    CHECK(rec.iterations_used == 1);
  }
  SUBCASE("echo-fixed-path repeats itself until the budget runs out") {
    auto agent = scripted_agent("echo-fixed-path");
    const auto rec = run_single(wall_problem(), HintStrategy::CFP(), *agent, 6);
    CHECK_FALSE(rec.success);
    CHECK(rec.iterations_used == 6);
    for (const auto& entry : rec.transcript) CHECK(entry.response == rec.transcript.front().response);
  }
  SUBCASE("echo-fixed-path with an explicit array") {
    auto agent = scripted_agent("echo-fixed-path=[[1,1],[9,9]]");
    const auto rec = run_single(open_problem(), HintStrategy::none(), *agent, 3);
    CHECK(rec.success);
    CHECK(rec.final_path == Path{pt(1, 1), pt(9, 9)});
  }
  SUBCASE("echo-oracle answers correctly on the first try") {
    for (const auto& p : handcrafted_suite()) {
      auto agent = scripted_agent("echo-oracle");
      const auto rec = run_single(p, HintStrategy::none(), *agent, 20);
      CHECK_MESSAGE(rec.success, p.name);
      CHECK(rec.iterations_used == 1);
    }
  }
  SUBCASE("random-walk is reproducible per seed") {
    auto a = scripted_agent("random-walk", 5);
    auto b = scripted_agent("random-walk", 5);
    const auto ra = run_single(wall_problem(), HintStrategy::C(), *a, 5);
    const auto rb = run_single(wall_problem(), HintStrategy::C(), *b, 5);
    REQUIRE(ra.transcript.size() == rb.transcript.size());
    for (std::size_t i = 0; i < ra.transcript.size(); ++i) CHECK(ra.transcript[i].response == rb.transcript[i].response);
  }
  SUBCASE("replay") {
    auto agent = scripted_agent(R"(replay=["R"])");
    CHECK(agent->respond({}) == "R");
    CHECK(code_of([&] { agent->respond({}); }) == ErrorCode::Provider);
  }
}

TEST_CASE("policy validation") {
  CHECK_NOTHROW(validate_scripted_policy("follow-free-space"));
  CHECK_NOTHROW(validate_scripted_policy("random-walk=3"));
  CHECK(code_of([] { validate_scripted_policy("teleport"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { validate_scripted_policy("replay=[]"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { validate_scripted_policy("replay=nope"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("seed mixing") {
  CHECK(mix_seed(1, 2) == mix_seed(1, 2));
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
  CHECK(run_seed(7, 0, 1) != run_seed(7, 1, 0));
}
