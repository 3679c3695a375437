#include "loop.hpp"

#include <chrono>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "errors.hpp"
#include "prompts.hpp"

namespace pathloop {

using nlohmann::json;
using nlohmann::ordered_json;

RunRecord run_single(const Problem& problem, const HintStrategy& strategy, Agent& agent,
                     std::size_t max_iterations, const std::string& agent_summary) {
  if (max_iterations == 0) throw Error(ErrorCode::InvalidArgument, "max_iterations must be at least 1");
  RunRecord record;
  record.problem = problem;
  record.strategy = strategy;
  record.agent = agent_summary;

  std::vector<ChatMessage> messages = initial_prompt(problem, strategy);
  for (std::size_t iteration = 1; iteration <= max_iterations; ++iteration) {
    std::string response;
    try {
      response = agent.respond(messages);
    } catch (const Error& e) {
      throw AgentError(e.code(), e.what(), record);
    } catch (const std::exception& e) {
      throw AgentError(ErrorCode::Internal, e.what(), record);
    }
    record.iterations_used = iteration;
    messages.push_back({Role::Assistant, response, std::nullopt});

    TranscriptEntry entry;
    entry.iteration = iteration;
    entry.response = response;
    ParsedResponse parsed;
    try {
      parsed = parse_response(response);
    } catch (const Error& e) {
      ++record.parse_failures;
      entry.parse_error = std::string(error_code_name(e.code())) + ": " + e.what();
      record.transcript.push_back(std::move(entry));
      messages.push_back(syntax_reminder());
      continue;
    }

    entry.candidate = parsed.waypoints;
    record.final_path = parsed.waypoints;
    record.final_path_length = path_length(parsed.waypoints);
    entry.report = verify_path(problem, parsed.waypoints);
    if (entry.report->is_correct) {
      record.success = true;
      record.transcript.push_back(std::move(entry));
      break;
    }
    if (strategy.any()) {
      entry.hints = compute_hints(problem, parsed.waypoints, strategy);
      messages.push_back(feedback_prompt(*entry.hints));
    } else {
      messages.push_back(retry_without_hints());
    }
    record.transcript.push_back(std::move(entry));
  }
  return record;
}

ExperimentConfig ExperimentConfig::handcrafted_defaults() {
  ExperimentConfig config;
  config.repeats_per_problem = 10;
  config.max_iterations = 20;
  return config;
}

ExperimentConfig ExperimentConfig::random_defaults() {
  ExperimentConfig config;
  config.repeats_per_problem = 1;
  config.max_iterations = 5;
  return config;
}

std::uint64_t run_seed(std::uint64_t experiment_seed, std::size_t problem_index, std::size_t repeat) {
  return mix_seed(mix_seed(experiment_seed, problem_index), repeat);
}

JsonlSink::JsonlSink(std::filesystem::path path) : path_(std::move(path)) {
  std::ofstream out(path_, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path_.string());
}

void JsonlSink::append(const RunRecord& record) {
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::Io, "cannot append to " + path_.string());
  out << run_record_to_json(record).dump() << "\n";
  out.flush();
}

void JsonlSink::finalize(const std::vector<RunRecord>& ordered) {
  const std::filesystem::path tmp = path_.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    for (const auto& r : ordered) out << run_record_to_json(r).dump() << "\n";
  }
  std::filesystem::rename(tmp, path_);
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config, const ExperimentOptions& options) {
  if (config.max_iterations == 0) throw Error(ErrorCode::InvalidArgument, "max_iterations must be at least 1");
  if (config.repeats_per_problem == 0) throw Error(ErrorCode::InvalidArgument, "repeats must be at least 1");
  const AgentFactory factory = options.factory ? options.factory : make_agent_factory(config.agent);
  const std::string summary = config.agent.summary();

  const std::size_t total = config.problems.size() * config.repeats_per_problem;
  std::vector<std::optional<RunRecord>> slots(total);
  std::atomic<std::size_t> next{0};
  std::mutex sink_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total) return;
      if (options.cancel && options.cancel->load()) return;
      const std::size_t problem_index = task / config.repeats_per_problem;
      const std::size_t repeat = task % config.repeats_per_problem;
      const Problem& problem = config.problems[problem_index];

      const auto started = std::chrono::steady_clock::now();
      RunRecord record;
      try {
        auto agent = factory(run_seed(config.seed, problem_index, repeat));
        record = run_single(problem, config.strategy, *agent, config.max_iterations, summary);
      } catch (const AgentError& e) {
        record = e.partial();
        record.error = std::string(error_code_name(e.code())) + ": " + e.what();
      } catch (const Error& e) {
        record.problem = problem;
        record.strategy = config.strategy;
        record.agent = summary;
        record.error = std::string(error_code_name(e.code())) + ": " + e.what();
      }
      record.repeat = repeat;
      record.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

      std::lock_guard lock(sink_mutex);
      if (options.sink) options.sink->append(record);
      slots[task] = std::move(record);
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(config.workers, total));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<RunRecord> records;
  for (auto& slot : slots) {
    if (slot) records.push_back(std::move(*slot));
  }
  return records;
}

namespace {

ordered_json strategy_to_json(const HintStrategy& s) {
  return {{"name", s.name()},  {"collision", s.collision}, {"free_space", s.free_space},
          {"prefix", s.prefix}, {"image", s.image},         {"slice_count", s.slice_count}};
}

HintStrategy strategy_from_json(const json& doc) {
  HintStrategy s;
  s.collision = doc.at("collision").get<bool>();
  s.free_space = doc.at("free_space").get<bool>();
  s.prefix = doc.at("prefix").get<bool>();
  s.image = doc.at("image").get<bool>();
  s.slice_count = doc.at("slice_count").get<std::uint32_t>();
  return s;
}

VerificationReport report_from_json(const json& doc) {
  VerificationReport r;
  r.is_correct = doc.at("is_correct").get<bool>();
  r.starts_in_initial = doc.at("starts_in_initial").get<bool>();
  r.ends_in_goal = doc.at("ends_in_goal").get<bool>();
  for (const auto& c : doc.at("segment_collisions")) {
    r.segment_collisions.push_back({c.at(0).get<std::size_t>(), c.at(1).get<std::size_t>()});
  }
  return r;
}

}  // namespace

ordered_json run_record_to_json(const RunRecord& r) {
  ordered_json doc;
  doc["problem_name"] = r.problem.name;
  doc["obstacle_count"] = r.problem.obstacles.size();
  doc["strategy"] = strategy_to_json(r.strategy);
  doc["agent"] = r.agent;
  doc["repeat"] = r.repeat;
  doc["iterations_used"] = r.iterations_used;
  doc["success"] = r.success;
  doc["final_path"] = r.final_path ? path_to_json(*r.final_path) : ordered_json(nullptr);
  doc["final_path_length"] = r.final_path_length ? ordered_json(*r.final_path_length) : ordered_json(nullptr);
  doc["parse_failures"] = r.parse_failures;
  doc["error"] = r.error ? ordered_json(*r.error) : ordered_json(nullptr);
  doc["transcript"] = ordered_json::array();
  for (const auto& e : r.transcript) {
    ordered_json entry;
    entry["iteration"] = e.iteration;
    entry["response"] = e.response;
    entry["candidate"] = e.candidate ? path_to_json(*e.candidate) : ordered_json(nullptr);
    entry["parse_error"] = e.parse_error ? ordered_json(*e.parse_error) : ordered_json(nullptr);
    entry["report"] = e.report ? report_to_json(*e.report) : ordered_json(nullptr);
    entry["hints"] = e.hints ? hints_to_json(*e.hints) : ordered_json(nullptr);
    doc["transcript"].push_back(std::move(entry));
  }
  doc["problem"] = problem_to_json(r.problem);
  return doc;
}

RunRecord run_record_from_json(const json& doc) {
  RunRecord r;
  try {
    r.problem = problem_from_json(doc.at("problem"));
    r.strategy = strategy_from_json(doc.at("strategy"));
    r.agent = doc.at("agent").get<std::string>();
    r.repeat = doc.at("repeat").get<std::size_t>();
    r.iterations_used = doc.at("iterations_used").get<std::size_t>();
    r.success = doc.at("success").get<bool>();
    if (!doc.at("final_path").is_null()) r.final_path = path_from_json(doc.at("final_path"));
    if (!doc.at("final_path_length").is_null()) r.final_path_length = doc.at("final_path_length").get<std::size_t>();
    r.parse_failures = doc.at("parse_failures").get<std::size_t>();
    if (!doc.at("error").is_null()) r.error = doc.at("error").get<std::string>();
    for (const auto& e : doc.at("transcript")) {
      TranscriptEntry entry;
      entry.iteration = e.at("iteration").get<std::size_t>();
      entry.response = e.at("response").get<std::string>();
      if (!e.at("candidate").is_null()) entry.candidate = path_from_json(e.at("candidate"));
      if (!e.at("parse_error").is_null()) entry.parse_error = e.at("parse_error").get<std::string>();
      if (!e.at("report").is_null()) entry.report = report_from_json(e.at("report"));
      r.transcript.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("run record: ") + e.what());
  }
  return r;
}

std::vector<RunRecord> parse_results_jsonl(std::string_view text) {
  std::vector<RunRecord> records;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::Parse, "results line " + std::to_string(line_no) + ": " + e.what());
    }
    records.push_back(run_record_from_json(doc));
  }
  return records;
}

ordered_json experiment_metadata(const ExperimentConfig& config, const std::vector<RunRecord>& records,
                                  const std::string& started_at, const std::string& finished_at) {
  ordered_json doc;
  doc["code_version"] = std::string("pathloop ") + PATHLOOP_VERSION;
  doc["started_at"] = started_at;
  doc["finished_at"] = finished_at;
  auto& cfg = doc["config"];
  cfg["problems"] = ordered_json::array();
  for (const auto& p : config.problems) cfg["problems"].push_back(p.name);
  cfg["strategy"] = strategy_to_json(config.strategy);
  cfg["agent"] = config.agent.summary();
  cfg["temperature"] = config.agent.temperature ? ordered_json(*config.agent.temperature) : ordered_json(nullptr);
  cfg["repeats_per_problem"] = config.repeats_per_problem;
  cfg["max_iterations"] = config.max_iterations;
  cfg["seed"] = config.seed;
  cfg["workers"] = config.workers;
  doc["timings"] = ordered_json::array();
  for (const auto& r : records) {
    doc["timings"].push_back({{"problem", r.problem.name}, {"repeat", r.repeat}, {"wall_time", r.wall_time}});
  }
  return doc;
}

}  // namespace pathloop
