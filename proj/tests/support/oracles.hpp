#pragma once

// Brute-force reference checks used as ground truth by the tests. They share
// no code with the library's predicates: everything here works on doubles
// taken straight from the vertex lists.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "problem.hpp"

namespace oracles {

struct Vec {
  double x;
  double y;
};

std::vector<Vec> corners(const pathloop::ConvexPolygon& poly);
Vec to_vec(const pathloop::Point& p);

/// Strictly inside with a margin: every edge cross product exceeds `margin`
/// times the edge length.
bool strictly_inside(const std::vector<Vec>& ccw, Vec p, double margin = 1e-9);

/// Evaluates the segment at `samples` evenly spaced parameters and reports
/// whether any sample lands strictly inside the polygon.
bool sampled_interior_hit(Vec a, Vec b, const std::vector<Vec>& ccw, int samples = 10000);

double point_segment_distance(Vec p, Vec a, Vec b);

/// Smallest distance from p to `samples` points spread evenly along the
/// polygon boundary.
double sampled_boundary_distance(Vec p, const std::vector<Vec>& ccw, int samples = 1000);

/// Occupancy grid over the workspace with the given pitch. A cell center is
/// blocked when it lies within `inflate` of an obstacle (closed) or, with
/// inflate > 0, within `inflate` of the workspace boundary.
struct Grid {
  double min_x, min_y, pitch;
  int nx, ny;
  std::vector<std::uint8_t> blocked;

  bool at(int i, int j) const { return blocked[static_cast<std::size_t>(j) * nx + i] != 0; }
};

Grid rasterize(const pathloop::Problem& problem, double pitch, double inflate);

/// 4-connected BFS from the free cells whose centers lie in I to any free
/// cell whose center lies in G.
bool grid_reachable(const pathloop::Problem& problem, const Grid& grid);

/// Longest prefix that starts in I and whose segments are collision-free,
/// found by verifying every prefix separately.
pathloop::Path longest_correct_prefix(const pathloop::Problem& problem, const pathloop::Path& path);

struct Png {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> rgb;

  std::uint32_t pixel(std::uint32_t x, std::uint32_t y) const;
};

/// Decodes an 8-bit RGB, non-interlaced PNG with filter type 0 rows. Returns
/// nullopt for anything else or on checksum mismatch.
std::optional<Png> decode_png(const std::vector<std::uint8_t>& bytes);

}  // namespace oracles
