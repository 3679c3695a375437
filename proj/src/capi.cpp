#include "pathloop/pathloop.h"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <new>

#include "errors.hpp"
#include "generator.hpp"
#include "metrics.hpp"
#include "suite.hpp"

using namespace pathloop;

struct pl_problem {
  Problem value;
};
struct pl_path {
  Path value;
};
struct pl_report {
  VerificationReport value;
};
struct pl_hints {
  HintBundle value;
};
struct pl_cancel_token {
  std::atomic<bool> flag{false};
};

namespace {

thread_local std::string last_error;

pl_status fail(pl_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs body and converts exceptions into status codes.
template <typename F>
pl_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return PL_OK;
  } catch (const Error& e) {
    return fail(static_cast<pl_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(PL_ERR_PARSE, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(PL_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PL_ERR_INTERNAL, "unknown failure");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

OracleConfig oracle_config(const pl_oracle_config* config) {
  OracleConfig out;
  if (!config) return out;
  if (config->epsilon_fraction) out.epsilon_fraction = parse_decimal(config->epsilon_fraction);
  if (out.epsilon_fraction <= 0) throw Error(ErrorCode::InvalidArgument, "epsilon fraction must be positive");
  switch (config->objective) {
    case PL_MIN_LENGTH: out.objective = Objective::MinEuclideanLength; break;
    case PL_MIN_SEGMENTS: out.objective = Objective::MinSegments; break;
    default: throw Error(ErrorCode::InvalidArgument, "unknown objective");
  }
  return out;
}

HintStrategy hint_strategy(const pl_hint_strategy& s) {
  HintStrategy out;
  out.collision = s.collision != 0;
  out.free_space = s.free_space != 0;
  out.prefix = s.prefix != 0;
  out.image = s.image != 0;
  out.slice_count = s.slice_count;
  if (out.free_space && out.slice_count == 0) throw Error(ErrorCode::InvalidArgument, "slice count must be positive");
  return out;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

pl_problem* wrap(Problem p) { return new pl_problem{std::move(p)}; }

}  // namespace

extern "C" {

const char* pl_version(void) { return PATHLOOP_VERSION; }

const char* pl_status_name(pl_status status) {
  if (status == PL_OK) return "Ok";
  return error_code_name(static_cast<ErrorCode>(status));
}

const char* pl_last_error_message(void) { return last_error.c_str(); }

void pl_string_free(char* text) { std::free(text); }

void pl_bytes_free(uint8_t* bytes) { std::free(bytes); }

pl_status pl_problem_from_json(const char* text, pl_problem** out) {
  return guarded([&] {
    require(text && out, "text and out");
    *out = wrap(load_problem(text));
  });
}

pl_status pl_problem_from_file(const char* file, pl_problem** out) {
  return guarded([&] {
    require(file && out, "file and out");
    *out = wrap(load_problem_file(file));
  });
}

pl_status pl_problem_to_json(const pl_problem* problem, char** out) {
  return guarded([&] {
    require(problem && out, "problem and out");
    *out = dup_string(serialize_problem(problem->value));
  });
}

const char* pl_problem_name(const pl_problem* problem) { return problem ? problem->value.name.c_str() : ""; }

size_t pl_problem_obstacle_count(const pl_problem* problem) {
  return problem ? problem->value.obstacles.size() : 0;
}

void pl_problem_free(pl_problem* problem) { delete problem; }

pl_status pl_problems_from_directory(const char* dir, pl_problem*** out, size_t* count) {
  return guarded([&] {
    require(dir && out && count, "dir, out and count");
    auto problems = load_problem_directory(dir);
    auto** array = static_cast<pl_problem**>(std::calloc(problems.size() ? problems.size() : 1, sizeof(pl_problem*)));
    if (!array) throw std::bad_alloc();
    for (std::size_t i = 0; i < problems.size(); ++i) array[i] = wrap(std::move(problems[i]));
    *out = array;
    *count = problems.size();
  });
}

void pl_problem_array_free(pl_problem** problems, size_t count) {
  if (!problems) return;
  for (size_t i = 0; i < count; ++i) delete problems[i];
  std::free(problems);
}

size_t pl_suite_size(void) { return handcrafted_suite().size(); }

pl_status pl_suite_get(size_t index, pl_problem** out) {
  return guarded([&] {
    require(out != nullptr, "out");
    const auto& suite = handcrafted_suite();
    if (index >= suite.size()) throw Error(ErrorCode::InvalidArgument, "suite index out of range");
    *out = wrap(suite[index]);
  });
}

pl_status pl_suite_find(const char* name, pl_problem** out) {
  return guarded([&] {
    require(name && out, "name and out");
    auto p = find_suite_problem(name);
    if (!p) throw Error(ErrorCode::InvalidArgument, std::string("no suite problem named '") + name + "'");
    *out = wrap(std::move(*p));
  });
}

void pl_generator_config_init(pl_generator_config* config) {
  if (!config) return;
  const GeneratorConfig d;
  config->obstacle_count = d.obstacle_count;
  config->grid_tiles = d.grid_tiles;
  config->overlap = nullptr;
  config->seed = d.seed;
  config->require_solvable = d.require_solvable;
  config->max_regeneration_attempts = d.max_regeneration_attempts;
}

pl_status pl_generate_random(const pl_generator_config* config, pl_problem** out) {
  return guarded([&] {
    require(config && out, "config and out");
    GeneratorConfig c;
    c.obstacle_count = config->obstacle_count;
    c.grid_tiles = config->grid_tiles;
    if (config->overlap) c.overlap = parse_decimal(config->overlap);
    c.seed = config->seed;
    c.require_solvable = config->require_solvable != 0;
    c.max_regeneration_attempts = config->max_regeneration_attempts;
    *out = wrap(generate_random(c));
  });
}

pl_status pl_make_unsolvable_variant(const pl_problem* problem, uint64_t seed, pl_problem** out) {
  return guarded([&] {
    require(problem && out, "problem and out");
    *out = wrap(make_unsolvable_variant(problem->value, seed));
  });
}

pl_status pl_path_parse(const char* text, pl_path** out) {
  return guarded([&] {
    require(text && out, "text and out");
    *out = new pl_path{parse_response(text).waypoints};
  });
}

size_t pl_path_waypoint_count(const pl_path* path) { return path ? path->value.size() : 0; }

pl_status pl_path_to_text(const pl_path* path, char** out) {
  return guarded([&] {
    require(path && out, "path and out");
    *out = dup_string(format_points(path->value));
  });
}

void pl_path_free(pl_path* path) { delete path; }

pl_status pl_verify_path(const pl_problem* problem, const pl_path* path, pl_report** out) {
  return guarded([&] {
    require(problem && path && out, "problem, path and out");
    *out = new pl_report{verify_path(problem->value, path->value)};
  });
}

int pl_report_is_correct(const pl_report* report) { return report && report->value.is_correct; }

int pl_report_starts_in_initial(const pl_report* report) { return report && report->value.starts_in_initial; }

int pl_report_ends_in_goal(const pl_report* report) { return report && report->value.ends_in_goal; }

size_t pl_report_collision_count(const pl_report* report) {
  return report ? report->value.segment_collisions.size() : 0;
}

pl_status pl_report_collision(const pl_report* report, size_t index, size_t* segment, size_t* obstacle) {
  return guarded([&] {
    require(report && segment && obstacle, "report, segment and obstacle");
    const auto& c = report->value.segment_collisions;
    if (index >= c.size()) throw Error(ErrorCode::InvalidArgument, "collision index out of range");
    *segment = c[index].segment_index;
    *obstacle = c[index].obstacle_index;
  });
}

pl_status pl_report_to_json(const pl_report* report, char** out) {
  return guarded([&] {
    require(report && out, "report and out");
    *out = dup_string(report_to_json(report->value).dump(2) + "\n");
  });
}

void pl_report_free(pl_report* report) { delete report; }

void pl_oracle_config_init(pl_oracle_config* config) {
  if (!config) return;
  config->epsilon_fraction = nullptr;
  config->objective = PL_MIN_LENGTH;
}

pl_status pl_oracle_plan(const pl_problem* problem, const pl_oracle_config* config, int* is_solvable, pl_path** path,
                         char** cost) {
  return guarded([&] {
    require(problem && is_solvable, "problem and solvable");
    const OracleResult result = plan(problem->value, oracle_config(config));
    *is_solvable = result.solvable;
    if (path) *path = result.path ? new pl_path{*result.path} : nullptr;
    if (cost) *cost = result.cost ? dup_string(to_decimal(*result.cost)) : nullptr;
  });
}

pl_status pl_oracle_solvable(const pl_problem* problem, const pl_oracle_config* config, int* is_solvable) {
  return guarded([&] {
    require(problem && is_solvable, "problem and solvable");
    *is_solvable = solvable(problem->value, oracle_config(config));
  });
}

pl_status pl_hint_strategy_preset(const char* name, pl_hint_strategy* out) {
  return guarded([&] {
    require(name && out, "name and out");
    const HintStrategy s = HintStrategy::from_name(name);
    *out = {s.collision, s.free_space, s.prefix, s.image, s.slice_count};
  });
}

pl_status pl_hints_compute(const pl_problem* problem, const pl_path* candidate, const pl_hint_strategy* strategy,
                           pl_hints** out) {
  return guarded([&] {
    require(problem && candidate && strategy && out, "problem, candidate, strategy and out");
    if (candidate->value.empty()) throw Error(ErrorCode::EmptyPath, "candidate path has no waypoints");
    *out = new pl_hints{compute_hints(problem->value, candidate->value, hint_strategy(*strategy))};
  });
}

pl_status pl_hints_to_json(const pl_hints* hints, char** out) {
  return guarded([&] {
    require(hints && out, "hints and out");
    *out = dup_string(hints_to_json(hints->value).dump(2) + "\n");
  });
}

pl_status pl_hints_feedback_text(const pl_hints* hints, char** out) {
  return guarded([&] {
    require(hints && out, "hints and out");
    *out = dup_string(feedback_prompt(hints->value).text);
  });
}

void pl_hints_free(pl_hints* hints) { delete hints; }

pl_status pl_render_png(const pl_problem* problem, const pl_path* path, uint32_t width, uint32_t height,
                        uint8_t** out, size_t* size) {
  return guarded([&] {
    require(problem && out && size, "problem, out and size");
    if (width == 0 || height == 0) throw Error(ErrorCode::InvalidArgument, "image size must be positive");
    std::optional<Path> p;
    if (path) p = path->value;
    const ImageHint image = render_image(problem->value, p, RenderSettings{width, height});
    auto* bytes = static_cast<uint8_t*>(std::malloc(image.png.size()));
    if (!bytes) throw std::bad_alloc();
    std::memcpy(bytes, image.png.data(), image.png.size());
    *out = bytes;
    *size = image.png.size();
  });
}

pl_status pl_export_finetune(const pl_problem* const* problems, size_t count, const pl_oracle_config* config,
                             pl_envelope envelope, char** out) {
  return guarded([&] {
    require(out != nullptr, "out");
    require(problems || count == 0, "problems");
    std::vector<Problem> list;
    for (size_t i = 0; i < count; ++i) {
      require(problems[i] != nullptr, "problem entry");
      list.push_back(problems[i]->value);
    }
    const auto env = envelope == PL_ENVELOPE_CHAT ? DatasetEnvelope::ChatMessages : DatasetEnvelope::PromptCompletion;
    *out = dup_string(export_finetune_dataset(list, oracle_config(config), env));
  });
}

pl_status pl_agent_check(const char* agent) {
  return guarded([&] {
    require(agent != nullptr, "agent");
    const AgentConfig config = agent_config_from_spec(agent);
    if (config.provider == Provider::Scripted) {
      validate_scripted_policy(config.model_id);
    } else {
      require_credential(config.provider);
    }
  });
}

pl_cancel_token* pl_cancel_token_new(void) { return new (std::nothrow) pl_cancel_token; }

void pl_cancel_token_trigger(pl_cancel_token* token) {
  if (token) token->flag.store(true);
}

void pl_cancel_token_free(pl_cancel_token* token) { delete token; }

void pl_experiment_config_init(pl_experiment_config* config, int random_defaults) {
  if (!config) return;
  const ExperimentConfig d = random_defaults ? ExperimentConfig::random_defaults() : ExperimentConfig::handcrafted_defaults();
  const AgentConfig a;
  *config = pl_experiment_config{};
  config->strategy = {0, 0, 0, 0, kDefaultSliceCount};
  config->repeats = static_cast<uint32_t>(d.repeats_per_problem);
  config->max_iterations = static_cast<uint32_t>(d.max_iterations);
  config->seed = d.seed;
  config->workers = static_cast<uint32_t>(d.workers);
  config->timeout_seconds = a.timeout_seconds;
  config->max_retries = a.max_retries;
  config->requests_per_minute = a.requests_per_minute;
}

pl_status pl_run_experiment(const pl_experiment_config* config, pl_experiment_summary* summary) {
  return guarded([&] {
    require(config && summary && config->agent, "config, agent and summary");
    require(config->problems || config->problem_count == 0, "problems");
    ExperimentConfig c;
    for (size_t i = 0; i < config->problem_count; ++i) {
      require(config->problems[i] != nullptr, "problem entry");
      c.problems.push_back(config->problems[i]->value);
    }
    c.strategy = hint_strategy(config->strategy);
    c.agent = agent_config_from_spec(config->agent);
    if (config->has_temperature) c.agent.temperature = config->temperature;
    c.agent.timeout_seconds = config->timeout_seconds;
    c.agent.max_retries = config->max_retries;
    c.agent.requests_per_minute = config->requests_per_minute;
    c.repeats_per_problem = config->repeats;
    c.max_iterations = config->max_iterations;
    c.seed = config->seed;
    c.workers = config->workers;

    const std::string started = utc_now();
    std::optional<JsonlSink> sink;
    if (config->results_path) sink.emplace(config->results_path);
    ExperimentOptions options;
    options.sink = sink ? &*sink : nullptr;
    options.cancel = config->cancel ? &config->cancel->flag : nullptr;
    const auto records = run_experiment(c, options);
    if (sink) sink->finalize(records);

    if (config->metadata_path) {
      std::ofstream meta(config->metadata_path, std::ios::binary | std::ios::trunc);
      if (!meta) throw Error(ErrorCode::Io, std::string("cannot write ") + config->metadata_path);
      meta << experiment_metadata(c, records, started, utc_now()).dump(2) << "\n";
    }

    *summary = {records.size(), 0, 0};
    for (const auto& r : records) {
      if (r.success) ++summary->successes;
      if (r.error) ++summary->errors;
    }
    if (config->cancel && config->cancel->flag.load()) {
      throw Error(ErrorCode::Cancelled, "experiment cancelled after " + std::to_string(records.size()) + " runs");
    }
  });
}

pl_status pl_report_table(const char* results_jsonl, pl_grouping grouping, pl_table_format format, char** out) {
  return guarded([&] {
    require(results_jsonl && out, "results and out");
    const auto records = parse_results_jsonl(results_jsonl);
    const auto rows =
        aggregate(records, grouping == PL_GROUP_BY_OBSTACLE_COUNT ? Grouping::ByObstacleCount : Grouping::ByProblem);
    *out = dup_string(render_table(rows, format == PL_TABLE_MARKDOWN ? TableFormat::Markdown : TableFormat::Csv));
  });
}

}  // extern "C"
