#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "problem.hpp"

namespace pathloop {

struct SegmentHit {
  std::size_t segment_index;
  std::size_t obstacle_index;
  Point from;
  Point to;
};

struct CollisionHint {
  bool starts_in_initial = false;
  bool ends_in_goal = false;
  std::vector<SegmentHit> colliding_segments;
};

struct FreeSpaceSlice {
  Rational x;
  std::vector<Point> safe_points;
};

struct FreeSpaceHint {
  std::vector<FreeSpaceSlice> slices;
};

struct PrefixHint {
  Path prefix;
};

struct ImageHint {
  std::vector<std::uint8_t> png;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
};

struct HintBundle {
  std::optional<CollisionHint> collision;
  std::optional<FreeSpaceHint> free_space;
  std::optional<PrefixHint> prefix;
  std::optional<ImageHint> image;

  bool empty() const { return !collision && !free_space && !prefix && !image; }
};

inline constexpr std::uint32_t kDefaultSliceCount = 5;

struct HintStrategy {
  bool collision = false;
  bool free_space = false;
  bool prefix = false;
  bool image = false;
  std::uint32_t slice_count = kDefaultSliceCount;

  bool any() const { return collision || free_space || prefix || image; }
  /// Preset name when the flags match one ("none", "C", "CFP", "CFPI"),
  /// otherwise a "+"-joined flag list.
  std::string name() const;

  static HintStrategy none() { return {}; }
  static HintStrategy C() { return {true, false, false, false}; }
  static HintStrategy CFP() { return {true, true, true, false}; }
  static HintStrategy CFPI() { return {true, true, true, true}; }
  /// Throws Error{InvalidArgument} for unknown names.
  static HintStrategy from_name(const std::string& name);

  friend bool operator==(const HintStrategy&, const HintStrategy&) = default;
};

CollisionHint collision_hint(const Problem& problem, const Path& path);

/// Safe waypoints on the center line of each of `slice_count` equal vertical
/// slices: the midpoint of every obstacle-free interval at least 2*epsilon
/// long, kept only if it is at least epsilon away from every obstacle.
FreeSpaceHint free_space_hint(const Problem& problem, std::uint32_t slice_count,
                              const Rational& epsilon_fraction = default_clearance_fraction());

PrefixHint prefix_hint(const Problem& problem, const Path& path);

struct RenderSettings {
  std::uint32_t width = 512;
  std::uint32_t height = 512;
};

/// PNG rendering: white background and workspace, obstacles red, initial set
/// blue, goal green, optional path as a black polyline with waypoint dots.
ImageHint render_image(const Problem& problem, const std::optional<Path>& path,
                       const RenderSettings& settings = {});

/// Hints enabled by `strategy` for the latest candidate.
HintBundle compute_hints(const Problem& problem, const Path& candidate, const HintStrategy& strategy,
                         const RenderSettings& render = {});

nlohmann::ordered_json hints_to_json(const HintBundle& bundle);

}  // namespace pathloop
