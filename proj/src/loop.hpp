#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "agents.hpp"
#include "errors.hpp"
#include "hints.hpp"
#include "verify.hpp"

namespace pathloop {

struct TranscriptEntry {
  std::size_t iteration = 0;
  std::string response;
  /// Absent when the response could not be parsed.
  std::optional<Path> candidate;
  std::optional<std::string> parse_error;
  std::optional<VerificationReport> report;
  std::optional<HintBundle> hints;
};

struct RunRecord {
  Problem problem;
  HintStrategy strategy;
  std::string agent;
  std::size_t repeat = 0;
  std::size_t iterations_used = 0;
  bool success = false;
  /// Last parsed candidate, correct or not.
  std::optional<Path> final_path;
  std::optional<std::size_t> final_path_length;
  std::vector<TranscriptEntry> transcript;
  std::size_t parse_failures = 0;
  std::optional<std::string> error;
  /// Kept out of the JSONL line so result files are reproducible; written to
  /// the metadata sidecar instead.
  double wall_time = 0;
};

/// Raised when the agent fails mid-run; carries the transcript so far.
class AgentError : public Error {
 public:
  AgentError(ErrorCode code, const std::string& message, RunRecord partial)
      : Error(code, message), partial_(std::move(partial)) {}
  const RunRecord& partial() const { return partial_; }

 private:
  RunRecord partial_;
};

/// Propose, verify, hint, re-prompt until a correct path or `max_iterations`
/// responses. A response without a parseable path still uses an iteration.
RunRecord run_single(const Problem& problem, const HintStrategy& strategy, Agent& agent,
                     std::size_t max_iterations, const std::string& agent_summary = "");

struct ExperimentConfig {
  std::vector<Problem> problems;
  HintStrategy strategy;
  AgentConfig agent;
  std::size_t repeats_per_problem = 10;
  std::size_t max_iterations = 20;
  std::uint64_t seed = 0;
  std::size_t workers = 1;

  /// 10 repeats with 20 iterations for handcrafted problems,
  /// one attempt with 5 iterations for random instances.
  static ExperimentConfig handcrafted_defaults();
  static ExperimentConfig random_defaults();
};

class ResultsSink {
 public:
  virtual ~ResultsSink() = default;
  /// Called once per finished run, serialized across workers.
  virtual void append(const RunRecord& record) = 0;
};

/// Appends one JSON line per record to a file as runs finish. finalize()
/// rewrites the file in (problem, repeat) order.
class JsonlSink : public ResultsSink {
 public:
  explicit JsonlSink(std::filesystem::path path);
  void append(const RunRecord& record) override;
  void finalize(const std::vector<RunRecord>& ordered);

 private:
  std::filesystem::path path_;
};

struct ExperimentOptions {
  ResultsSink* sink = nullptr;
  const std::atomic<bool>* cancel = nullptr;
  /// Overrides the factory derived from config.agent (tests).
  AgentFactory factory;
};

/// Runs every (problem, repeat) pair on a bounded worker pool. The result is
/// ordered by (problem, repeat). Cancelled runs are skipped; runs whose agent
/// failed are recorded with `error` set.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config, const ExperimentOptions& options = {});

std::uint64_t run_seed(std::uint64_t experiment_seed, std::size_t problem_index, std::size_t repeat);

nlohmann::ordered_json run_record_to_json(const RunRecord& record);
RunRecord run_record_from_json(const nlohmann::json& doc);
std::vector<RunRecord> parse_results_jsonl(std::string_view text);

nlohmann::ordered_json experiment_metadata(const ExperimentConfig& config, const std::vector<RunRecord>& records,
                                           const std::string& started_at, const std::string& finished_at);

}  // namespace pathloop
