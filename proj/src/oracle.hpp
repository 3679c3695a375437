#pragma once

#include <optional>
#include <string>
#include <vector>

#include "problem.hpp"

namespace pathloop {

enum class Objective { MinEuclideanLength, MinSegments };

struct OracleConfig {
  /// Clearance as a fraction of the workspace diagonal.
  Rational epsilon_fraction = default_clearance_fraction();
  Objective objective = Objective::MinEuclideanLength;
};

struct OracleResult {
  bool solvable = false;
  std::optional<Path> path;
  /// Segment count or Euclidean length (snapped to the decimal grid).
  std::optional<Rational> cost;
};

/// Shortest path over the visibility graph whose nodes are the initial and
/// goal centers plus every obstacle corner pushed epsilon outward along its
/// angle bisector. Corners that land outside the workspace or inside an
/// obstacle are dropped. The returned path is re-verified before return.
OracleResult plan(const Problem& problem, const OracleConfig& config = {});

bool solvable(const Problem& problem, const OracleConfig& config = {});

enum class DatasetEnvelope { PromptCompletion, ChatMessages };

/// One JSONL record per problem holding the initial prompt and the oracle
/// path. Throws Error{UnsolvableInBatch} listing every unsolvable problem.
std::string export_finetune_dataset(const std::vector<Problem>& problems,
                                    const OracleConfig& config = {},
                                    DatasetEnvelope envelope = DatasetEnvelope::PromptCompletion);

}  // namespace pathloop
