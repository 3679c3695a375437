#pragma once

#include <cstdint>
#include <random>

namespace pathloop {

// std::uniform_*_distribution differ between standard libraries; these draw
// straight from the engine so seeded output is identical everywhere.
using Engine = std::mt19937_64;

/// Uniform integer in [0, bound), bound > 0, by rejection.
inline std::uint64_t uniform_below(Engine& engine, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    const std::uint64_t draw = engine();
    if (draw < limit) return draw % bound;
  }
}

/// Uniform integer in [lo, hi].
inline std::int64_t uniform_between(Engine& engine, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(uniform_below(engine, static_cast<std::uint64_t>(hi - lo) + 1));
}

}  // namespace pathloop
