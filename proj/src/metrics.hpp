#pragma once

#include <optional>
#include <string>
#include <vector>

#include "loop.hpp"

namespace pathloop {

enum class Grouping { ByProblem, ByObstacleCount };
enum class TableFormat { Csv, Markdown };

struct MetricsRow {
  std::string group;
  Rational success_rate;
  /// Absent when no run of the group succeeded.
  std::optional<Rational> mean_iterations;
  std::optional<Rational> mean_path_length;
  std::size_t run_count = 0;
  /// Records claiming success whose final path did not re-verify.
  std::size_t flagged = 0;
};

/// S% over all runs; N and PL averaged over successful runs only. Successes
/// are re-verified against the embedded problem. Rows follow the handcrafted
/// suite order (other names sorted after it) or ascending obstacle count.
/// Throws Error{EmptyInput} for an empty record list.
std::vector<MetricsRow> aggregate(const std::vector<RunRecord>& records, Grouping grouping);

/// Columns group, S%, N, PL, runs. S% as an integer, N and PL with one
/// decimal (half-up), "-" for absent values.
std::string render_table(const std::vector<MetricsRow>& rows, TableFormat format);

Grouping grouping_from_name(const std::string& name);
TableFormat table_format_from_name(const std::string& name);

}  // namespace pathloop
