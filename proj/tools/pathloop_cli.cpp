#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pathloop/pathloop.h"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kIncorrect = 1, kUsage = 2, kTransport = 3, kDomain = 4, kInterrupted = 130 };

// Carries a library failure up to main().
struct Failure {
  pl_status status;
  std::string message;
};

void check(pl_status status) {
  if (status != PL_OK) throw Failure{status, pl_last_error_message()};
}

int exit_code(pl_status status) {
  switch (status) {
    case PL_ERR_INVALID_ARGUMENT:
    case PL_ERR_IO:
      return kUsage;
    case PL_ERR_AUTH:
    case PL_ERR_RATE_LIMITED:
    case PL_ERR_TIMEOUT:
    case PL_ERR_PROVIDER:
      return kTransport;
    case PL_ERR_CANCELLED:
      return kInterrupted;
    default:
      return kDomain;
  }
}

struct ProblemDeleter {
  void operator()(pl_problem* p) const { pl_problem_free(p); }
};
struct PathDeleter {
  void operator()(pl_path* p) const { pl_path_free(p); }
};
struct ReportDeleter {
  void operator()(pl_report* p) const { pl_report_free(p); }
};
struct HintsDeleter {
  void operator()(pl_hints* p) const { pl_hints_free(p); }
};
using ProblemPtr = std::unique_ptr<pl_problem, ProblemDeleter>;
using PathPtr = std::unique_ptr<pl_path, PathDeleter>;

std::string take(char* text) {
  std::string out = text ? text : "";
  pl_string_free(text);
  return out;
}

std::string read_file(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Failure{PL_ERR_IO, "cannot read " + file};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& file, const std::string& data) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure{PL_ERR_IO, "cannot write " + file.string()};
  out << data;
}

// A problem file, or the name of a handcrafted problem.
ProblemPtr load_problem(const std::string& ref) {
  pl_problem* p = nullptr;
  if (fs::exists(ref)) {
    check(pl_problem_from_file(ref.c_str(), &p));
  } else if (pl_suite_find(ref.c_str(), &p) != PL_OK) {
    throw Failure{PL_ERR_IO, "no problem file or suite problem '" + ref + "'"};
  }
  return ProblemPtr(p);
}

// "suite", a directory, a file, or a comma-separated list of files and
// suite names.
std::vector<ProblemPtr> load_problems(const std::string& spec) {
  std::vector<ProblemPtr> out;
  if (spec == "suite") {
    for (size_t i = 0; i < pl_suite_size(); ++i) {
      pl_problem* p = nullptr;
      check(pl_suite_get(i, &p));
      out.emplace_back(p);
    }
  } else if (fs::is_directory(spec)) {
    pl_problem** array = nullptr;
    size_t count = 0;
    check(pl_problems_from_directory(spec.c_str(), &array, &count));
    for (size_t i = 0; i < count; ++i) {
      out.emplace_back(array[i]);
      array[i] = nullptr;
    }
    pl_problem_array_free(array, count);
  } else {
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ',');) {
      if (!item.empty()) out.push_back(load_problem(item));
    }
  }
  if (out.empty()) throw Failure{PL_ERR_INVALID_ARGUMENT, "no problems selected by '" + spec + "'"};
  return out;
}

std::vector<const pl_problem*> views(const std::vector<ProblemPtr>& problems) {
  std::vector<const pl_problem*> out;
  for (const auto& p : problems) out.push_back(p.get());
  return out;
}

// Inline waypoint text or @file.
PathPtr load_path(const std::string& arg) {
  const std::string text = !arg.empty() && arg[0] == '@' ? read_file(arg.substr(1)) : arg;
  pl_path* path = nullptr;
  check(pl_path_parse(text.c_str(), &path));
  return PathPtr(path);
}

pl_hint_strategy strategy_from(const std::string& name, unsigned slices) {
  pl_hint_strategy s{};
  check(pl_hint_strategy_preset(name.c_str(), &s));
  s.slice_count = slices;
  return s;
}

pl_oracle_config oracle_from(const std::string& objective, const std::string& epsilon) {
  pl_oracle_config c;
  pl_oracle_config_init(&c);
  c.objective = objective == "segments" ? PL_MIN_SEGMENTS : PL_MIN_LENGTH;
  c.epsilon_fraction = epsilon.empty() ? nullptr : epsilon.c_str();
  return c;
}

pl_cancel_token* g_cancel = nullptr;

extern "C" void on_interrupt(int) { pl_cancel_token_trigger(g_cancel); }

const std::vector<std::string> kStrategies{"none", "C", "CFP", "CFPI"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop path planning with verified hints"};
  app.require_subcommand(1);
  app.set_version_flag("--version", pl_version());

  // run
  auto* run = app.add_subcommand("run", "Run an experiment and write results JSONL");
  std::string run_problems, run_strategy = "none", run_agent, run_out = "results.jsonl";
  unsigned run_repeats = 10, run_iters = 20, run_workers = 1, run_slices = 5, run_retries = 3;
  std::uint64_t run_seed = 0;
  double run_temperature = 0, run_timeout = 120, run_rpm = 0;
  run->add_option("--problems", run_problems, "suite, a directory, or comma-separated files/suite names")->required();
  run->add_option("--strategy", run_strategy, "Hint strategy")->check(CLI::IsMember(kStrategies))->capture_default_str();
  run->add_option("--agent", run_agent, "provider:model, e.g. scripted:follow-free-space")->required();
  run->add_option("--repeats", run_repeats, "Runs per problem")->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--max-iters", run_iters, "Iteration budget per run")->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--out", run_out, "Results JSONL; metadata goes to <out>.meta.json")->capture_default_str();
  run->add_option("--workers", run_workers, "Concurrent runs")->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--seed", run_seed, "Experiment seed")->capture_default_str();
  auto* run_temp_opt = run->add_option("--temperature", run_temperature, "Sampling temperature (provider default if unset)");
  run->add_option("--slices", run_slices, "Free-space slice count")->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--timeout", run_timeout, "Per-request timeout in seconds")->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--retries", run_retries, "Retries on transient provider errors")->capture_default_str();
  run->add_option("--rpm", run_rpm, "Requests per minute per provider, 0 for unlimited")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  // generate
  auto* gen = app.add_subcommand("generate", "Generate random problems");
  unsigned gen_k = 0, gen_n = 1, gen_tiles = 9, gen_attempts = 100;
  std::uint64_t gen_seed = 0;
  bool gen_solvable = false;
  std::string gen_overlap = "0.2", gen_out = "generated", gen_block;
  gen->add_option("--k", gen_k, "Obstacles per problem")->required()->check(CLI::PositiveNumber);
  gen->add_option("--n-instances", gen_n, "Problems to write; instance i uses seed + i")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "Base seed")->capture_default_str();
  gen->add_flag("--require-solvable", gen_solvable, "Resample until the oracle finds a path");
  gen->add_option("--grid-tiles", gen_tiles, "Grid cells")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--overlap", gen_overlap, "Tile growth fraction in [0, 1]")->capture_default_str();
  gen->add_option("--max-attempts", gen_attempts, "Regeneration budget")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--out", gen_out, "Output directory")->capture_default_str();
  gen->add_option("--block", gen_block, "Instead write blocked unsolvable variants of these problems");

  // verify
  auto* ver = app.add_subcommand("verify", "Check a path against a problem");
  std::string ver_problem, ver_path;
  bool ver_json = false;
  ver->add_option("problem", ver_problem, "Problem file or suite name")->required();
  ver->add_option("--path", ver_path, "Waypoints inline or @file")->required();
  ver->add_flag("--json", ver_json, "Print the report as JSON");

  // hint
  auto* hint = app.add_subcommand("hint", "Compute hints for a candidate path");
  std::string hint_problem, hint_path, hint_strategy = "CFP";
  unsigned hint_slices = 5;
  bool hint_json = false;
  hint->add_option("problem", hint_problem, "Problem file or suite name")->required();
  hint->add_option("--path", hint_path, "Waypoints inline or @file")->required();
  hint->add_option("--strategy", hint_strategy, "Hint strategy")->check(CLI::IsMember(kStrategies))->capture_default_str();
  hint->add_option("--slices", hint_slices, "Free-space slice count")->check(CLI::PositiveNumber)->capture_default_str();
  hint->add_flag("--json", hint_json, "Print hints as JSON instead of feedback text");

  // render
  auto* ren = app.add_subcommand("render", "Render a problem (and path) to PNG");
  std::string ren_problem, ren_path, ren_out = "render.png";
  unsigned ren_w = 512, ren_h = 512;
  ren->add_option("problem", ren_problem, "Problem file or suite name")->required();
  ren->add_option("--path", ren_path, "Waypoints inline or @file");
  ren->add_option("--out", ren_out, "PNG file")->capture_default_str();
  ren->add_option("--width", ren_w, "Image width")->check(CLI::PositiveNumber)->capture_default_str();
  ren->add_option("--height", ren_h, "Image height")->check(CLI::PositiveNumber)->capture_default_str();

  // oracle
  auto* ora = app.add_subcommand("oracle", "Plan with the reference planner");
  std::vector<std::string> ora_problems;
  bool ora_decide = false;
  std::string ora_objective = "length", ora_epsilon;
  ora->add_option("problems", ora_problems, "Problem files or suite names")->required();
  ora->add_flag("--decide", ora_decide, "Only print solvable or unsolvable");
  ora->add_option("--objective", ora_objective, "length or segments")
      ->check(CLI::IsMember({"length", "segments"}))
      ->capture_default_str();
  ora->add_option("--epsilon-fraction", ora_epsilon, "Clearance as a fraction of the workspace diagonal");

  // export-finetune
  auto* exp = app.add_subcommand("export-finetune", "Write oracle solutions as a training JSONL");
  std::string exp_problems, exp_out = "train.jsonl", exp_envelope = "prompt-completion";
  exp->add_option("--problems", exp_problems, "suite, a directory, or comma-separated files/suite names")->required();
  exp->add_option("--out", exp_out, "Dataset JSONL")->capture_default_str();
  exp->add_option("--envelope", exp_envelope, "prompt-completion or chat")
      ->check(CLI::IsMember({"prompt-completion", "chat"}))
      ->capture_default_str();

  // report
  auto* rep = app.add_subcommand("report", "Aggregate results JSONL into a metrics table");
  std::string rep_in, rep_group = "by_problem", rep_format = "csv", rep_out;
  rep->add_option("results", rep_in, "Results JSONL")->required();
  rep->add_option("--group", rep_group, "by_problem or by_obstacle_count")
      ->check(CLI::IsMember({"by_problem", "by_obstacle_count"}))
      ->capture_default_str();
  rep->add_option("--format", rep_format, "csv or markdown")
      ->check(CLI::IsMember({"csv", "markdown"}))
      ->capture_default_str();
  rep->add_option("--out", rep_out, "Write the table here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) {
      check(pl_agent_check(run_agent.c_str()));
      auto problems = load_problems(run_problems);
      auto list = views(problems);
      const std::string meta = run_out + ".meta.json";

      pl_experiment_config c;
      pl_experiment_config_init(&c, 0);
      c.problems = list.data();
      c.problem_count = list.size();
      c.strategy = strategy_from(run_strategy, run_slices);
      c.agent = run_agent.c_str();
      c.has_temperature = run_temp_opt->count() > 0;
      c.temperature = run_temperature;
      c.repeats = run_repeats;
      c.max_iterations = run_iters;
      c.seed = run_seed;
      c.workers = run_workers;
      c.timeout_seconds = run_timeout;
      c.max_retries = run_retries;
      c.requests_per_minute = run_rpm;
      c.results_path = run_out.c_str();
      c.metadata_path = meta.c_str();
      g_cancel = pl_cancel_token_new();
      c.cancel = g_cancel;
      std::signal(SIGINT, on_interrupt);

      pl_experiment_summary summary{};
      const pl_status status = pl_run_experiment(&c, &summary);
      std::signal(SIGINT, SIG_DFL);
      pl_cancel_token_free(g_cancel);
      g_cancel = nullptr;
      std::cerr << summary.successes << "/" << summary.runs << " runs succeeded";
      if (summary.errors) std::cerr << ", " << summary.errors << " ended in agent errors";
      std::cerr << "; results in " << run_out << "\n";
      check(status);
      return kOk;
    }

    if (*gen) {
      fs::create_directories(gen_out);
      if (!gen_block.empty()) {
        auto problems = load_problems(gen_block);
        for (size_t i = 0; i < problems.size(); ++i) {
          pl_problem* variant = nullptr;
          check(pl_make_unsolvable_variant(problems[i].get(), gen_seed + i, &variant));
          ProblemPtr owned(variant);
          std::string file = pl_problem_name(variant);
          for (char& ch : file) {
            if (ch == ' ' || ch == '(' || ch == ')' || ch == '/') ch = '_';
          }
          char* json = nullptr;
          check(pl_problem_to_json(variant, &json));
          write_file(fs::path(gen_out) / (file + ".json"), take(json));
        }
        return kOk;
      }
      for (unsigned i = 0; i < gen_n; ++i) {
        pl_generator_config g;
        pl_generator_config_init(&g);
        g.obstacle_count = gen_k;
        g.grid_tiles = gen_tiles;
        g.overlap = gen_overlap.c_str();
        g.seed = gen_seed + i;
        g.require_solvable = gen_solvable;
        g.max_regeneration_attempts = gen_attempts;
        pl_problem* p = nullptr;
        check(pl_generate_random(&g, &p));
        ProblemPtr owned(p);
        char* json = nullptr;
        check(pl_problem_to_json(p, &json));
        write_file(fs::path(gen_out) / (std::string(pl_problem_name(p)) + ".json"), take(json));
      }
      return kOk;
    }

    if (*ver) {
      auto problem = load_problem(ver_problem);
      auto path = load_path(ver_path);
      pl_report* raw = nullptr;
      check(pl_verify_path(problem.get(), path.get(), &raw));
      std::unique_ptr<pl_report, ReportDeleter> report(raw);
      if (ver_json) {
        char* json = nullptr;
        check(pl_report_to_json(raw, &json));
        std::cout << take(json);
      } else {
        std::cout << (pl_report_is_correct(raw) ? "correct" : "incorrect") << "\n";
        std::cout << "starts in I: " << (pl_report_starts_in_initial(raw) ? "yes" : "no") << "\n";
        std::cout << "ends in G: " << (pl_report_ends_in_goal(raw) ? "yes" : "no") << "\n";
        for (size_t i = 0; i < pl_report_collision_count(raw); ++i) {
          size_t seg = 0, obs = 0;
          check(pl_report_collision(raw, i, &seg, &obs));
          std::cout << "segment " << seg << " intersects obstacle " << obs << "\n";
        }
      }
      return pl_report_is_correct(raw) ? kOk : kIncorrect;
    }

    if (*hint) {
      auto problem = load_problem(hint_problem);
      auto path = load_path(hint_path);
      const pl_hint_strategy s = strategy_from(hint_strategy, hint_slices);
      pl_hints* raw = nullptr;
      check(pl_hints_compute(problem.get(), path.get(), &s, &raw));
      std::unique_ptr<pl_hints, HintsDeleter> hints(raw);
      char* text = nullptr;
      check(hint_json ? pl_hints_to_json(raw, &text) : pl_hints_feedback_text(raw, &text));
      std::cout << take(text);
      if (!hint_json) std::cout << "\n";
      return kOk;
    }

    if (*ren) {
      auto problem = load_problem(ren_problem);
      PathPtr path;
      if (!ren_path.empty()) path = load_path(ren_path);
      uint8_t* bytes = nullptr;
      size_t size = 0;
      check(pl_render_png(problem.get(), path.get(), ren_w, ren_h, &bytes, &size));
      const std::string png(reinterpret_cast<const char*>(bytes), size);
      pl_bytes_free(bytes);
      write_file(ren_out, png);
      return kOk;
    }

    if (*ora) {
      const pl_oracle_config oc = oracle_from(ora_objective, ora_epsilon);
      for (const auto& ref : ora_problems) {
        auto problem = load_problem(ref);
        const std::string label = ora_problems.size() > 1 ? std::string(pl_problem_name(problem.get())) + ": " : "";
        int ok = 0;
        if (ora_decide) {
          check(pl_oracle_solvable(problem.get(), &oc, &ok));
          std::cout << label << (ok ? "solvable" : "unsolvable") << "\n";
          continue;
        }
        pl_path* raw = nullptr;
        char* cost = nullptr;
        check(pl_oracle_plan(problem.get(), &oc, &ok, &raw, &cost));
        PathPtr path(raw);
        if (!ok) {
          std::cout << label << "unsolvable\n";
          continue;
        }
        char* text = nullptr;
        check(pl_path_to_text(raw, &text));
        std::cout << label << take(text) << "\n" << label << "cost " << take(cost) << "\n";
      }
      return kOk;
    }

    if (*exp) {
      auto problems = load_problems(exp_problems);
      auto list = views(problems);
      const pl_oracle_config oc = oracle_from("length", "");
      char* out = nullptr;
      check(pl_export_finetune(list.data(), list.size(), &oc,
                               exp_envelope == "chat" ? PL_ENVELOPE_CHAT : PL_ENVELOPE_PROMPT_COMPLETION, &out));
      write_file(exp_out, take(out));
      std::cerr << list.size() << " records written to " << exp_out << "\n";
      return kOk;
    }

    if (*rep) {
      const std::string text = read_file(rep_in);
      char* out = nullptr;
      check(pl_report_table(text.c_str(),
                            rep_group == "by_obstacle_count" ? PL_GROUP_BY_OBSTACLE_COUNT : PL_GROUP_BY_PROBLEM,
                            rep_format == "markdown" ? PL_TABLE_MARKDOWN : PL_TABLE_CSV, &out));
      const std::string table = take(out);
      if (rep_out.empty()) std::cout << table;
      else write_file(rep_out, table);
      return kOk;
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << pl_status_name(f.status) << ": " << f.message << "\n";
    return exit_code(f.status);
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
