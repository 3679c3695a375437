#pragma once

#include <cstdint>

#include "oracle.hpp"

namespace pathloop {

struct GeneratorConfig {
  std::uint32_t obstacle_count = 1;
  /// Grid cells; laid out as ceil(sqrt(n)) columns.
  std::uint32_t grid_tiles = 9;
  /// Each tile grows about its center by (1 + overlap) before sampling.
  Rational overlap = Rational(1, 5);
  std::uint64_t seed = 0;
  bool require_solvable = false;
  std::uint32_t max_regeneration_attempts = 100;
  OracleConfig oracle;
};

/// Throws Error{InvalidArgument} unless 0 < k < n and overlap is in [0, 1].
void validate_generator_config(const GeneratorConfig& config);

struct Tile {
  Box cell;
  Box expanded;
};

/// The sampling tiles (expanded and clipped to the workspace) that do not
/// touch the initial or goal set, in row-major order.
std::vector<Tile> generator_tiles(const GeneratorConfig& config);

/// Workspace [0,10]^2, I and G fixed squares in the lower-left and
/// upper-right corners, k obstacles each the hull of four points drawn on a
/// 0.001 grid inside distinct tiles. Throws Error{GenerationExhausted} when
/// require_solvable cannot be met within the attempt budget.
Problem generate_random(const GeneratorConfig& config);

/// Adds a full-span slab between I and G. Throws Error{Precondition} if the
/// input is already unsolvable and Error{CannotBlock} if no slab fits.
Problem make_unsolvable_variant(const Problem& problem, std::uint64_t seed, const OracleConfig& oracle = {});

}  // namespace pathloop
