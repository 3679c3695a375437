#ifndef PATHLOOP_PATHLOOP_H
#define PATHLOOP_PATHLOOP_H

#include <stddef.h>
#include <stdint.h>

#if defined(PATHLOOP_BUILDING_LIBRARY)
#define PL_API __attribute__((visibility("default")))
#else
#define PL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pl_status {
  PL_OK = 0,
  PL_ERR_INVALID_ARGUMENT = 1,
  PL_ERR_PARSE = 2,
  PL_ERR_INVALID_PROBLEM = 3,
  PL_ERR_EMPTY_PATH = 4,
  PL_ERR_GENERATION_EXHAUSTED = 5,
  PL_ERR_CANNOT_BLOCK = 6,
  PL_ERR_PRECONDITION = 7,
  PL_ERR_UNSOLVABLE_IN_BATCH = 8,
  PL_ERR_NO_PATH_FOUND = 9,
  PL_ERR_MALFORMED_PAIR = 10,
  PL_ERR_EMPTY_BUNDLE = 11,
  PL_ERR_EMPTY_INPUT = 12,
  PL_ERR_AUTH = 13,
  PL_ERR_RATE_LIMITED = 14,
  PL_ERR_TIMEOUT = 15,
  PL_ERR_PROVIDER = 16,
  PL_ERR_IO = 17,
  PL_ERR_CANCELLED = 18,
  PL_ERR_INTERNAL = 99
} pl_status;

typedef struct pl_problem pl_problem;
typedef struct pl_path pl_path;
typedef struct pl_report pl_report;
typedef struct pl_hints pl_hints;
typedef struct pl_cancel_token pl_cancel_token;

PL_API const char* pl_version(void);
PL_API const char* pl_status_name(pl_status status);
/* Message of the last failed call on this thread; empty after success. */
PL_API const char* pl_last_error_message(void);
PL_API void pl_string_free(char* text);
PL_API void pl_bytes_free(uint8_t* bytes);

/* Problems */
PL_API pl_status pl_problem_from_json(const char* text, pl_problem** out);
PL_API pl_status pl_problem_from_file(const char* file, pl_problem** out);
PL_API pl_status pl_problem_to_json(const pl_problem* problem, char** out);
PL_API const char* pl_problem_name(const pl_problem* problem);
PL_API size_t pl_problem_obstacle_count(const pl_problem* problem);
PL_API void pl_problem_free(pl_problem* problem);

/* Every *.json file of a directory, in filename order. */
PL_API pl_status pl_problems_from_directory(const char* dir, pl_problem*** out, size_t* count);
PL_API void pl_problem_array_free(pl_problem** problems, size_t count);

PL_API size_t pl_suite_size(void);
PL_API pl_status pl_suite_get(size_t index, pl_problem** out);
PL_API pl_status pl_suite_find(const char* name, pl_problem** out);

/* Generation */
typedef struct pl_generator_config {
  uint32_t obstacle_count;
  uint32_t grid_tiles;
  /* Decimal text in [0, 1]; NULL keeps the default. */
  const char* overlap;
  uint64_t seed;
  int require_solvable;
  uint32_t max_regeneration_attempts;
} pl_generator_config;

PL_API void pl_generator_config_init(pl_generator_config* config);
PL_API pl_status pl_generate_random(const pl_generator_config* config, pl_problem** out);
PL_API pl_status pl_make_unsolvable_variant(const pl_problem* problem, uint64_t seed, pl_problem** out);

/* Paths */

/* Extracts the last waypoint array from free text. */
PL_API pl_status pl_path_parse(const char* text, pl_path** out);
PL_API size_t pl_path_waypoint_count(const pl_path* path);
PL_API pl_status pl_path_to_text(const pl_path* path, char** out);
PL_API void pl_path_free(pl_path* path);

/* Verification */
PL_API pl_status pl_verify_path(const pl_problem* problem, const pl_path* path, pl_report** out);
PL_API int pl_report_is_correct(const pl_report* report);
PL_API int pl_report_starts_in_initial(const pl_report* report);
PL_API int pl_report_ends_in_goal(const pl_report* report);
PL_API size_t pl_report_collision_count(const pl_report* report);
PL_API pl_status pl_report_collision(const pl_report* report, size_t index, size_t* segment, size_t* obstacle);
PL_API pl_status pl_report_to_json(const pl_report* report, char** out);
PL_API void pl_report_free(pl_report* report);

/* Oracle */
typedef enum pl_objective { PL_MIN_LENGTH = 0, PL_MIN_SEGMENTS = 1 } pl_objective;

typedef struct pl_oracle_config {
  /* Clearance as a fraction of the workspace diagonal, decimal text; NULL
     keeps the default. */
  const char* epsilon_fraction;
  pl_objective objective;
} pl_oracle_config;

PL_API void pl_oracle_config_init(pl_oracle_config* config);
/* config may be NULL. path and cost may be NULL; they are set to NULL when
   the problem is unsolvable. cost is decimal text. */
PL_API pl_status pl_oracle_plan(const pl_problem* problem, const pl_oracle_config* config, int* solvable,
                                pl_path** path, char** cost);
PL_API pl_status pl_oracle_solvable(const pl_problem* problem, const pl_oracle_config* config, int* solvable);

/* Hints */
typedef struct pl_hint_strategy {
  int collision;
  int free_space;
  int prefix;
  int image;
  uint32_t slice_count;
} pl_hint_strategy;

/* "none", "C", "CFP" or "CFPI". */
PL_API pl_status pl_hint_strategy_preset(const char* name, pl_hint_strategy* out);
PL_API pl_status pl_hints_compute(const pl_problem* problem, const pl_path* candidate,
                                  const pl_hint_strategy* strategy, pl_hints** out);
PL_API pl_status pl_hints_to_json(const pl_hints* hints, char** out);
/* The feedback message an agent would receive. */
PL_API pl_status pl_hints_feedback_text(const pl_hints* hints, char** out);
PL_API void pl_hints_free(pl_hints* hints);

/* Rendering; path may be NULL. Release the buffer with pl_bytes_free. */
PL_API pl_status pl_render_png(const pl_problem* problem, const pl_path* path, uint32_t width, uint32_t height,
                               uint8_t** out, size_t* size);

/* Fine-tuning dataset */
typedef enum pl_envelope { PL_ENVELOPE_PROMPT_COMPLETION = 0, PL_ENVELOPE_CHAT = 1 } pl_envelope;

PL_API pl_status pl_export_finetune(const pl_problem* const* problems, size_t count, const pl_oracle_config* config,
                                    pl_envelope envelope, char** out);

/* Experiments */

/* Validates "provider:model" and, for live providers, that the credential
   environment variable is set. */
PL_API pl_status pl_agent_check(const char* agent);

PL_API pl_cancel_token* pl_cancel_token_new(void);
/* Async-signal-safe. Runs not yet started are skipped. */
PL_API void pl_cancel_token_trigger(pl_cancel_token* token);
PL_API void pl_cancel_token_free(pl_cancel_token* token);

typedef struct pl_experiment_config {
  const pl_problem* const* problems;
  size_t problem_count;
  pl_hint_strategy strategy;
  const char* agent;
  int has_temperature;
  double temperature;
  uint32_t repeats;
  uint32_t max_iterations;
  uint64_t seed;
  uint32_t workers;
  double timeout_seconds;
  uint32_t max_retries;
  double requests_per_minute;
  /* Results JSONL and metadata sidecar; either may be NULL. */
  const char* results_path;
  const char* metadata_path;
  pl_cancel_token* cancel;
} pl_experiment_config;

typedef struct pl_experiment_summary {
  size_t runs;
  size_t successes;
  size_t errors;
} pl_experiment_summary;

/* random_defaults selects 1 repeat with 5 iterations instead of 10 with 20. */
PL_API void pl_experiment_config_init(pl_experiment_config* config, int random_defaults);
PL_API pl_status pl_run_experiment(const pl_experiment_config* config, pl_experiment_summary* summary);

/* Reports */
typedef enum pl_grouping { PL_GROUP_BY_PROBLEM = 0, PL_GROUP_BY_OBSTACLE_COUNT = 1 } pl_grouping;
typedef enum pl_table_format { PL_TABLE_CSV = 0, PL_TABLE_MARKDOWN = 1 } pl_table_format;

PL_API pl_status pl_report_table(const char* results_jsonl, pl_grouping grouping, pl_table_format format,
                                 char** out);

#ifdef __cplusplus
}
#endif

#endif
