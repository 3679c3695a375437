#pragma once

#include <concepts>
#include <filesystem>
#include <random>
#include <unistd.h>
#include <string>
#include <vector>

#include "errors.hpp"
#include "problem.hpp"
#include "random.hpp"

namespace testing {

using namespace pathloop;

inline Rational q(const char* text) { return parse_decimal(text); }
inline Point pt(const char* x, const char* y) { return {q(x), q(y)}; }
template <std::integral T>
Point pt(T x, T y) {
  return {Rational(static_cast<long>(x)), Rational(static_cast<long>(y))};
}

inline ConvexPolygon rect(const char* x0, const char* y0, const char* x1, const char* y1) {
  return make_rectangle(q(x0), q(y0), q(x1), q(y1));
}

inline ConvexPolygon square(long x0, long y0, long x1, long y1) {
  return make_rectangle(Rational(x0), Rational(y0), Rational(x1), Rational(y1));
}

inline Problem open_problem(std::vector<ConvexPolygon> obstacles = {}) {
  return Problem{"open", square(0, 0, 10, 10), rect("0.5", "0.5", "1.5", "1.5"), rect("8.5", "8.5", "9.5", "9.5"),
                 std::move(obstacles), {}};
}

inline Problem wall_problem() {
  return Problem{"wall", square(0, 0, 10, 10), square(0, 0, 1, 1), rect("8.5", "8.5", "9.5", "9.5"),
                 {rect("4.5", "0", "5.5", "7")}, {}};
}

/// Random point on a 1/1000 grid inside [lo, hi]^2.
inline Point random_point(Engine& e, long lo, long hi) {
  Rational x(uniform_between(e, lo * 1000, hi * 1000), 1000), y(uniform_between(e, lo * 1000, hi * 1000), 1000);
  x.canonicalize();
  y.canonicalize();
  return {x, y};
}

inline Path random_path(Engine& e, std::size_t max_waypoints, long lo = 0, long hi = 10) {
  Path p;
  const auto n = 1 + uniform_below(e, max_waypoints);
  for (std::uint64_t i = 0; i < n; ++i) p.push_back(random_point(e, lo, hi));
  return p;
}

/// Fresh empty directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("pathloop-test-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

}  // namespace testing
