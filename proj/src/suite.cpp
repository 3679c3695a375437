#include "suite.hpp"

#include <utility>

namespace pathloop {

namespace {

Rational num(const char* text) { return parse_decimal(text); }

ConvexPolygon rect(const char* x0, const char* y0, const char* x1, const char* y1) {
  return make_rectangle(num(x0), num(y0), num(x1), num(y1));
}

ConvexPolygon quad(std::initializer_list<std::pair<const char*, const char*>> corners) {
  std::vector<Point> pts;
  for (const auto& [x, y] : corners) pts.push_back({num(x), num(y)});
  return ConvexPolygon(std::move(pts));
}

Problem make(const char* name, ConvexPolygon initial, ConvexPolygon goal, std::vector<ConvexPolygon> obstacles) {
  Problem p{name, rect("0", "0", "10", "10"), std::move(initial), std::move(goal), std::move(obstacles),
            {"handcrafted"}};
  validate_problem(p);
  return p;
}

std::vector<Problem> build() {
  std::vector<Problem> suite;
  const auto lower_left = [] { return rect("0.5", "0.5", "1.5", "1.5"); };
  const auto upper_right = [] { return rect("8.5", "8.5", "9.5", "9.5"); };

  suite.push_back(make("Box Boundary", rect("1", "1", "2", "2"), rect("8", "8", "9", "9"),
                       {rect("0", "0", "10", "0.5"), rect("9.5", "0.5", "10", "9.5"),
                        rect("0", "9.5", "10", "10"), rect("0", "0.5", "0.5", "9.5")}));

  suite.push_back(make("Easy", lower_left(), upper_right(), {rect("4", "4", "6", "6")}));

  suite.push_back(make("Wall", rect("0", "0", "1", "1"), upper_right(), {rect("4.5", "0", "5.5", "7")}));

  suite.push_back(make("Box", lower_left(), rect("6.5", "4.5", "7.5", "5.5"),
                       {rect("5", "3", "5.5", "7"), rect("5.5", "3", "8.5", "3.5"), rect("5.5", "6.5", "8.5", "7")}));

  suite.push_back(make("Canyon", lower_left(), upper_right(),
                       {quad({{"0", "3"}, {"1", "3"}, {"8", "10"}, {"0", "10"}}),
                        quad({{"3", "0"}, {"10", "0"}, {"10", "8"}, {"3", "1"}})}));

  suite.push_back(make("Diagonal Wall", lower_left(), upper_right(),
                       {quad({{"2", "7.5"}, {"7.5", "2"}, {"8", "2.5"}, {"2.5", "8"}})}));

  suite.push_back(make("Curve", lower_left(), rect("8.5", "0.5", "9.5", "1.5"),
                       {rect("2", "0", "4", "7"), rect("6", "3", "8", "10")}));

  suite.push_back(make("Spiral", lower_left(), rect("4.5", "4.5", "5.5", "5.5"),
                       {rect("2", "2", "8", "2.5"), rect("7.5", "2.5", "8", "7.5"), rect("2", "7.5", "8", "8"),
                        rect("2", "2.5", "2.5", "5.5"), rect("3.5", "3.5", "6.5", "4"), rect("3.5", "6", "6.5", "6.5"),
                        rect("3.5", "4", "4", "6")}));

  suite.push_back(make("Maze", lower_left(), upper_right(),
                       {rect("0", "2.5", "8", "3"), rect("2", "5", "10", "5.5"), rect("0", "7.5", "8", "8"),
                        rect("5", "0", "5.5", "1.5")}));

  suite.push_back(make("Scots", lower_left(), rect("8.75", "0.5", "9.75", "1.5"),
                       {rect("2", "0", "2.5", "7"), rect("4", "3", "4.5", "10"), rect("6", "0", "6.5", "7"),
                        rect("8", "3", "8.5", "10"), rect("3", "1", "3.5", "1.5"), rect("7", "8.5", "7.5", "9")}));
  return suite;
}

}  // namespace

const std::vector<Problem>& handcrafted_suite() {
  static const std::vector<Problem> suite = build();
  return suite;
}

std::optional<Problem> find_suite_problem(const std::string& name) {
  for (const auto& p : handcrafted_suite()) {
    if (p.name == name) return p;
  }
  return std::nullopt;
}

}  // namespace pathloop
