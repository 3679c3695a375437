#include "oracles.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <deque>

#include "verify.hpp"

namespace oracles {

Vec to_vec(const pathloop::Point& p) { return {p.x.get_d(), p.y.get_d()}; }

std::vector<Vec> corners(const pathloop::ConvexPolygon& poly) {
  std::vector<Vec> out;
  for (const auto& v : poly.vertices()) out.push_back(to_vec(v));
  return out;
}

bool strictly_inside(const std::vector<Vec>& ccw, Vec p, double margin) {
  for (std::size_t i = 0; i < ccw.size(); ++i) {
    const Vec a = ccw[i], b = ccw[(i + 1) % ccw.size()];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) <= margin * len) return false;
  }
  return true;
}

bool sampled_interior_hit(Vec a, Vec b, const std::vector<Vec>& ccw, int samples) {
  for (int i = 0; i < samples; ++i) {
    const double t = samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1);
    if (strictly_inside(ccw, {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)})) return true;
  }
  return false;
}

double point_segment_distance(Vec p, Vec a, Vec b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 == 0 ? 0 : ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

double sampled_boundary_distance(Vec p, const std::vector<Vec>& ccw, int samples) {
  double perimeter = 0;
  for (std::size_t i = 0; i < ccw.size(); ++i) {
    const Vec a = ccw[i], b = ccw[(i + 1) % ccw.size()];
    perimeter += std::hypot(b.x - a.x, b.y - a.y);
  }
  double best = INFINITY;
  std::size_t edge = 0;
  double edge_start = 0;
  for (int k = 0; k < samples; ++k) {
    const double s = perimeter * k / samples;
    for (;;) {
      const Vec a = ccw[edge], b = ccw[(edge + 1) % ccw.size()];
      const double len = std::hypot(b.x - a.x, b.y - a.y);
      if (s <= edge_start + len || edge + 1 == ccw.size()) {
        const double t = len == 0 ? 0 : (s - edge_start) / len;
        best = std::min(best, std::hypot(p.x - (a.x + t * (b.x - a.x)), p.y - (a.y + t * (b.y - a.y))));
        break;
      }
      edge_start += len;
      ++edge;
    }
  }
  return best;
}

namespace {

// Distance from p to a closed convex polygon (0 inside).
double polygon_distance(Vec p, const std::vector<Vec>& ccw) {
  bool inside = true;
  double best = INFINITY;
  for (std::size_t i = 0; i < ccw.size(); ++i) {
    const Vec a = ccw[i], b = ccw[(i + 1) % ccw.size()];
    if ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) < 0) inside = false;
    best = std::min(best, point_segment_distance(p, a, b));
  }
  return inside ? 0 : best;
}

bool inside_closed(const std::vector<Vec>& ccw, Vec p) {
  for (std::size_t i = 0; i < ccw.size(); ++i) {
    const Vec a = ccw[i], b = ccw[(i + 1) % ccw.size()];
    if ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) < 0) return false;
  }
  return true;
}

}  // namespace

Grid rasterize(const pathloop::Problem& problem, double pitch, double inflate) {
  const auto& ws = problem.workspace.bounds();
  Grid g;
  g.min_x = ws.min_x.get_d();
  g.min_y = ws.min_y.get_d();
  g.pitch = pitch;
  g.nx = static_cast<int>(std::floor((ws.max_x.get_d() - g.min_x) / pitch));
  g.ny = static_cast<int>(std::floor((ws.max_y.get_d() - g.min_y) / pitch));
  g.blocked.assign(static_cast<std::size_t>(g.nx) * g.ny, 0);
  const double max_x = ws.max_x.get_d(), max_y = ws.max_y.get_d();

  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.min_x + (i + 0.5) * pitch, y = g.min_y + (j + 0.5) * pitch;
      if (inflate > 0 && (x - g.min_x < inflate || max_x - x < inflate || y - g.min_y < inflate || max_y - y < inflate)) {
        g.blocked[static_cast<std::size_t>(j) * g.nx + i] = 1;
      }
    }
  }
  for (const auto& obstacle : problem.obstacles) {
    const auto c = corners(obstacle);
    double lo_x = INFINITY, lo_y = INFINITY, hi_x = -INFINITY, hi_y = -INFINITY;
    for (const auto& v : c) {
      lo_x = std::min(lo_x, v.x);
      lo_y = std::min(lo_y, v.y);
      hi_x = std::max(hi_x, v.x);
      hi_y = std::max(hi_y, v.y);
    }
    const int i0 = std::max(0, static_cast<int>(std::floor((lo_x - inflate - g.min_x) / pitch)) - 1);
    const int i1 = std::min(g.nx - 1, static_cast<int>(std::ceil((hi_x + inflate - g.min_x) / pitch)) + 1);
    const int j0 = std::max(0, static_cast<int>(std::floor((lo_y - inflate - g.min_y) / pitch)) - 1);
    const int j1 = std::min(g.ny - 1, static_cast<int>(std::ceil((hi_y + inflate - g.min_y) / pitch)) + 1);
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        auto& cell = g.blocked[static_cast<std::size_t>(j) * g.nx + i];
        if (cell) continue;
        const Vec p{g.min_x + (i + 0.5) * pitch, g.min_y + (j + 0.5) * pitch};
        if (inflate > 0 ? polygon_distance(p, c) <= inflate : inside_closed(c, p)) cell = 1;
      }
    }
  }
  return g;
}

bool grid_reachable(const pathloop::Problem& problem, const Grid& grid) {
  const auto in_i = corners(problem.initial), in_g = corners(problem.goal);
  std::vector<std::uint8_t> seen(grid.blocked.size(), 0);
  std::deque<std::pair<int, int>> queue;
  auto center = [&](int i, int j) { return Vec{grid.min_x + (i + 0.5) * grid.pitch, grid.min_y + (j + 0.5) * grid.pitch}; };
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      if (!grid.at(i, j) && inside_closed(in_i, center(i, j))) {
        seen[static_cast<std::size_t>(j) * grid.nx + i] = 1;
        queue.emplace_back(i, j);
      }
    }
  }
  while (!queue.empty()) {
    const auto [i, j] = queue.front();
    queue.pop_front();
    if (inside_closed(in_g, center(i, j))) return true;
    const int di[] = {1, -1, 0, 0}, dj[] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const int ni = i + di[k], nj = j + dj[k];
      if (ni < 0 || nj < 0 || ni >= grid.nx || nj >= grid.ny) continue;
      auto& s = seen[static_cast<std::size_t>(nj) * grid.nx + ni];
      if (s || grid.at(ni, nj)) continue;
      s = 1;
      queue.emplace_back(ni, nj);
    }
  }
  return false;
}

pathloop::Path longest_correct_prefix(const pathloop::Problem& problem, const pathloop::Path& path) {
  pathloop::Path best;
  for (std::size_t m = 1; m <= path.size(); ++m) {
    const pathloop::Path sub(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(m));
    const auto report = pathloop::verify_path(problem, sub);
    if (!report.starts_in_initial || !report.segment_collisions.empty()) break;
    best = sub;
  }
  return best;
}

std::uint32_t Png::pixel(std::uint32_t x, std::uint32_t y) const {
  const std::size_t at = (static_cast<std::size_t>(y) * width + x) * 3;
  return (std::uint32_t{rgb[at]} << 16) | (std::uint32_t{rgb[at + 1]} << 8) | rgb[at + 2];
}

std::optional<Png> decode_png(const std::vector<std::uint8_t>& bytes) {
  static const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  if (bytes.size() < 8 || !std::equal(sig, sig + 8, bytes.begin())) return std::nullopt;
  auto be32 = [&](std::size_t at) {
    return (std::uint32_t{bytes[at]} << 24) | (std::uint32_t{bytes[at + 1]} << 16) | (std::uint32_t{bytes[at + 2]} << 8) |
           bytes[at + 3];
  };
  Png png;
  std::vector<std::uint8_t> idat;
  bool ended = false;
  for (std::size_t at = 8; at + 12 <= bytes.size();) {
    const std::uint32_t len = be32(at);
    if (at + 12 + len > bytes.size()) return std::nullopt;
    const std::string type(bytes.begin() + static_cast<std::ptrdiff_t>(at + 4), bytes.begin() + static_cast<std::ptrdiff_t>(at + 8));
    const std::uint32_t crc = static_cast<std::uint32_t>(crc32(0, bytes.data() + at + 4, len + 4));
    if (crc != be32(at + 8 + len)) return std::nullopt;
    const std::uint8_t* data = bytes.data() + at + 8;
    if (type == "IHDR") {
      png.width = be32(at + 8);
      png.height = be32(at + 12);
      if (data[8] != 8 || data[9] != 2 || data[12] != 0) return std::nullopt;
    } else if (type == "IDAT") {
      idat.insert(idat.end(), data, data + len);
    } else if (type == "IEND") {
      ended = true;
      break;
    }
    at += 12 + len;
  }
  if (!ended || png.width == 0) return std::nullopt;
  const std::size_t row = static_cast<std::size_t>(png.width) * 3 + 1;
  std::vector<std::uint8_t> raw(row * png.height);
  uLongf out_len = raw.size();
  if (uncompress(raw.data(), &out_len, idat.data(), idat.size()) != Z_OK || out_len != raw.size()) return std::nullopt;
  png.rgb.reserve(raw.size());
  for (std::uint32_t y = 0; y < png.height; ++y) {
    if (raw[y * row] != 0) return std::nullopt;
    png.rgb.insert(png.rgb.end(), raw.begin() + static_cast<std::ptrdiff_t>(y * row + 1),
                   raw.begin() + static_cast<std::ptrdiff_t>((y + 1) * row));
  }
  return png;
}

}  // namespace oracles
