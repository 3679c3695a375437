#include "hints.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "errors.hpp"

namespace pathloop {

namespace {

using Rgb = std::array<std::uint8_t, 3>;
constexpr Rgb kWhite{0xFF, 0xFF, 0xFF};
constexpr Rgb kBlue{0x00, 0x00, 0xFF};
constexpr Rgb kGreen{0x00, 0xA0, 0x00};
constexpr Rgb kRed{0xFF, 0x00, 0x00};
constexpr Rgb kBlack{0x00, 0x00, 0x00};

struct Raster {
  std::uint32_t width;
  std::uint32_t height;
  std::vector<std::uint8_t> rgb;

  void set(long x, long y, const Rgb& c) {
    if (x < 0 || y < 0 || x >= static_cast<long>(width) || y >= static_cast<long>(height)) return;
    const std::size_t at = (static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x)) * 3;
    std::copy(c.begin(), c.end(), rgb.begin() + static_cast<std::ptrdiff_t>(at));
  }
};

// World-to-pixel mapping: one uniform scale, y flipped, world box centered.
struct View {
  double min_x, max_y, scale, pad_x, pad_y;

  double px(double x) const { return (x - min_x) * scale + pad_x; }
  double py(double y) const { return (max_y - y) * scale + pad_y; }
  double wx(double px_center) const { return (px_center - pad_x) / scale + min_x; }
  double wy(double py_center) const { return max_y - (py_center - pad_y) / scale; }
};

struct DoublePolygon {
  std::vector<std::pair<double, double>> v;
  double min_x, min_y, max_x, max_y;

  explicit DoublePolygon(const ConvexPolygon& poly) {
    for (const auto& p : poly.vertices()) v.emplace_back(to_double(p.x), to_double(p.y));
    min_x = to_double(poly.bounds().min_x);
    min_y = to_double(poly.bounds().min_y);
    max_x = to_double(poly.bounds().max_x);
    max_y = to_double(poly.bounds().max_y);
  }

  bool contains(double x, double y) const {
    if (x < min_x || x > max_x || y < min_y || y > max_y) return false;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto& [ax, ay] = v[i];
      const auto& [bx, by] = v[(i + 1) % v.size()];
      if ((bx - ax) * (y - ay) - (by - ay) * (x - ax) < 0) return false;
    }
    return true;
  }
};

void fill(Raster& r, const View& view, const ConvexPolygon& poly, const Rgb& color) {
  const DoublePolygon dp(poly);
  const long x0 = std::max(0L, static_cast<long>(std::floor(view.px(dp.min_x))) - 1);
  const long x1 = std::min(static_cast<long>(r.width) - 1, static_cast<long>(std::ceil(view.px(dp.max_x))) + 1);
  const long y0 = std::max(0L, static_cast<long>(std::floor(view.py(dp.max_y))) - 1);
  const long y1 = std::min(static_cast<long>(r.height) - 1, static_cast<long>(std::ceil(view.py(dp.min_y))) + 1);
  for (long y = y0; y <= y1; ++y) {
    for (long x = x0; x <= x1; ++x) {
      if (dp.contains(view.wx(static_cast<double>(x) + 0.5), view.wy(static_cast<double>(y) + 0.5))) {
        r.set(x, y, color);
      }
    }
  }
}

void line(Raster& r, long x0, long y0, long x1, long y1, const Rgb& color) {
  const long dx = std::labs(x1 - x0);
  const long dy = -std::labs(y1 - y0);
  const long sx = x0 < x1 ? 1 : -1;
  const long sy = y0 < y1 ? 1 : -1;
  long err = dx + dy;
  for (;;) {
    r.set(x0, y0, color);
    r.set(x0 + 1, y0, color);
    r.set(x0, y0 + 1, color);
    if (x0 == x1 && y0 == y1) break;
    const long e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

void dot(Raster& r, long cx, long cy, const Rgb& color) {
  for (long dy = -3; dy <= 3; ++dy) {
    for (long dx = -3; dx <= 3; ++dx) {
      if (dx * dx + dy * dy <= 9) r.set(cx + dx, cy + dy, color);
    }
  }
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void chunk(std::vector<std::uint8_t>& out, const char* type, const std::vector<std::uint8_t>& data) {
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const uLong crc = crc32(0L, out.data() + start, static_cast<uInt>(out.size() - start));
  put_u32(out, static_cast<std::uint32_t>(crc));
}

// zlib stream made of stored (uncompressed) deflate blocks, so the encoded
// bytes depend only on the raster, never on the zlib build.
std::vector<std::uint8_t> stored_zlib(const std::vector<std::uint8_t>& raw) {
  std::vector<std::uint8_t> out{0x78, 0x01};
  constexpr std::size_t kBlock = 65535;
  std::size_t pos = 0;
  do {
    const std::size_t len = std::min(kBlock, raw.size() - pos);
    const bool last = pos + len == raw.size();
    out.push_back(last ? 1 : 0);
    out.push_back(static_cast<std::uint8_t>(len & 0xFF));
    out.push_back(static_cast<std::uint8_t>(len >> 8));
    out.push_back(static_cast<std::uint8_t>(~len & 0xFF));
    out.push_back(static_cast<std::uint8_t>((~len >> 8) & 0xFF));
    out.insert(out.end(), raw.begin() + static_cast<std::ptrdiff_t>(pos),
               raw.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
  } while (pos < raw.size());
  put_u32(out, static_cast<std::uint32_t>(adler32(1L, raw.data(), static_cast<uInt>(raw.size()))));
  return out;
}

std::vector<std::uint8_t> encode_png(const Raster& r) {
  std::vector<std::uint8_t> out{0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  std::vector<std::uint8_t> header;
  put_u32(header, r.width);
  put_u32(header, r.height);
  header.insert(header.end(), {8, 2, 0, 0, 0});  // 8-bit RGB, no interlace
  chunk(out, "IHDR", header);

  std::vector<std::uint8_t> raw;
  raw.reserve(static_cast<std::size_t>(r.height) * (1 + r.width * 3));
  for (std::uint32_t y = 0; y < r.height; ++y) {
    raw.push_back(0);  // filter: none
    const auto row = r.rgb.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(y) * r.width * 3);
    raw.insert(raw.end(), row, row + static_cast<std::ptrdiff_t>(r.width * 3));
  }
  chunk(out, "IDAT", stored_zlib(raw));
  chunk(out, "IEND", {});
  return out;
}

}  // namespace

ImageHint render_image(const Problem& problem, const std::optional<Path>& path,
                       const RenderSettings& settings) {
  if (settings.width == 0 || settings.height == 0) {
    throw Error(ErrorCode::InvalidArgument, "image dimensions must be positive");
  }
  Raster raster{settings.width, settings.height,
                std::vector<std::uint8_t>(static_cast<std::size_t>(settings.width) * settings.height * 3, 0xFF)};

  const Box& ws = problem.workspace.bounds();
  const double ww = to_double(ws.max_x - ws.min_x);
  const double wh = to_double(ws.max_y - ws.min_y);
  const double scale = std::min(settings.width / ww, settings.height / wh);
  const View view{to_double(ws.min_x), to_double(ws.max_y), scale, (settings.width - ww * scale) / 2,
                  (settings.height - wh * scale) / 2};

  fill(raster, view, problem.workspace, kWhite);
  for (const auto& o : problem.obstacles) fill(raster, view, o, kRed);
  fill(raster, view, problem.initial, kBlue);
  fill(raster, view, problem.goal, kGreen);

  if (path && !path->empty()) {
    std::vector<std::pair<long, long>> pixels;
    for (const auto& p : *path) {
      // Far-away waypoints are clamped so a wild candidate stays cheap to draw.
      const double limit_x = 3.0 * settings.width;
      const double limit_y = 3.0 * settings.height;
      pixels.emplace_back(std::lround(std::floor(std::clamp(view.px(to_double(p.x)), -limit_x, limit_x))),
                          std::lround(std::floor(std::clamp(view.py(to_double(p.y)), -limit_y, limit_y))));
    }
    for (std::size_t i = 0; i + 1 < pixels.size(); ++i) {
      line(raster, pixels[i].first, pixels[i].second, pixels[i + 1].first, pixels[i + 1].second, kBlack);
    }
    for (const auto& [x, y] : pixels) dot(raster, x, y, kBlack);
  }
  return {encode_png(raster), settings.width, settings.height};
}

}  // namespace pathloop
