#include "metrics.hpp"

#include <algorithm>
#include <map>

#include "errors.hpp"
#include "suite.hpp"

namespace pathloop {

namespace {

struct Accumulator {
  std::size_t runs = 0;
  std::size_t successes = 0;
  std::size_t flagged = 0;
  Rational iterations = 0;
  Rational lengths = 0;
};

bool reverified(const RunRecord& r) {
  if (!r.final_path || r.final_path->empty() || !r.final_path_length) return false;
  if (*r.final_path_length != r.final_path->size() - 1) return false;
  return verify_path(r.problem, *r.final_path).is_correct;
}

std::string fixed(const Rational& value, int digits) {
  std::string text = to_decimal(round_to_digits(value, digits));
  if (digits == 0) return text;
  auto dot = text.find('.');
  if (dot == std::string::npos) {
    text += '.';
    dot = text.size() - 1;
  }
  text.append(static_cast<std::size_t>(digits) - (text.size() - dot - 1), '0');
  return text;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string markdown_field(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::vector<MetricsRow> aggregate(const std::vector<RunRecord>& records, Grouping grouping) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no run records to aggregate");

  // Key: (rank, name). Rank orders suite problems first, or obstacle counts.
  std::map<std::pair<std::size_t, std::string>, Accumulator> groups;
  std::vector<std::string> suite_names;
  for (const auto& p : handcrafted_suite()) suite_names.push_back(p.name);

  for (const auto& r : records) {
    std::pair<std::size_t, std::string> key;
    if (grouping == Grouping::ByProblem) {
      const auto it = std::find(suite_names.begin(), suite_names.end(), r.problem.name);
      key = {static_cast<std::size_t>(it - suite_names.begin()), r.problem.name};
    } else {
      const std::size_t k = r.problem.obstacles.size();
      key = {k, std::to_string(k) + " Obs"};
    }
    auto& acc = groups[key];
    ++acc.runs;
    if (!r.success) continue;
    if (!reverified(r)) {
      ++acc.flagged;
      continue;
    }
    ++acc.successes;
    acc.iterations += r.iterations_used;
    acc.lengths += *r.final_path_length;
  }

  std::vector<MetricsRow> rows;
  for (const auto& [key, acc] : groups) {
    MetricsRow row;
    row.group = key.second;
    row.run_count = acc.runs;
    row.flagged = acc.flagged;
    row.success_rate = Rational(100 * acc.successes, acc.runs);
    row.success_rate.canonicalize();
    if (acc.successes > 0) {
      row.mean_iterations = acc.iterations / acc.successes;
      row.mean_path_length = acc.lengths / acc.successes;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string render_table(const std::vector<MetricsRow>& rows, TableFormat format) {
  auto cells = [](const MetricsRow& row) {
    return std::vector<std::string>{
        row.group, fixed(row.success_rate, 0),
        row.mean_iterations ? fixed(*row.mean_iterations, 1) : "-",
        row.mean_path_length ? fixed(*row.mean_path_length, 1) : "-", std::to_string(row.run_count)};
  };

  std::string out;
  if (format == TableFormat::Csv) {
    out = "group,S%,N,PL,runs\n";
    for (const auto& row : rows) {
      auto c = cells(row);
      c[0] = csv_field(c[0]);
      out += c[0] + "," + c[1] + "," + c[2] + "," + c[3] + "," + c[4] + "\n";
    }
  } else {
    out = "| group | S% | N | PL | runs |\n|---|---:|---:|---:|---:|\n";
    for (const auto& row : rows) {
      auto c = cells(row);
      c[0] = markdown_field(c[0]);
      out += "| " + c[0] + " | " + c[1] + " | " + c[2] + " | " + c[3] + " | " + c[4] + " |\n";
    }
  }
  return out;
}

Grouping grouping_from_name(const std::string& name) {
  if (name == "by_problem") return Grouping::ByProblem;
  if (name == "by_obstacle_count") return Grouping::ByObstacleCount;
  throw Error(ErrorCode::InvalidArgument, "unknown grouping '" + name + "'");
}

TableFormat table_format_from_name(const std::string& name) {
  if (name == "csv") return TableFormat::Csv;
  if (name == "markdown" || name == "md") return TableFormat::Markdown;
  throw Error(ErrorCode::InvalidArgument, "unknown table format '" + name + "'");
}

}  // namespace pathloop
