#include <doctest.h>

#include "helpers.hpp"

using namespace testing;

TEST_CASE("decimal parsing is exact") {
  CHECK(parse_decimal("1.5") == Rational(3, 2));
  CHECK(parse_decimal("-0.25") == Rational(-1, 4));
  CHECK(parse_decimal(".5") == Rational(1, 2));
  CHECK(parse_decimal("5.") == Rational(5));
  CHECK(parse_decimal("+2") == Rational(2));
  CHECK(parse_decimal("0.000000000001") == Rational(1, 1000000000000));
}

TEST_CASE("malformed or over-precise decimals are rejected") {
  for (const char* bad : {"", "abc", "1.2.3", "1e5", "-", ".", "1,5", " 1", "0.0000000000001"}) {
    CAPTURE(bad);
    CHECK(code_of([&] { parse_decimal(bad); }) == ErrorCode::Parse);
  }
}

TEST_CASE("decimal rendering") {
  CHECK(to_decimal(Rational(3, 2)) == "1.5");
  CHECK(to_decimal(Rational(10)) == "10");
  CHECK(to_decimal(Rational(-1, 8)) == "-0.125");
  CHECK(to_decimal(Rational(0)) == "0");
  CHECK(code_of([] { to_decimal(Rational(1, 3)); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("half-up rounding onto the decimal grid") {
  CHECK(round_to_digits(Rational(5, 10000000000)) == Rational(1, 1000000000));
  CHECK(round_to_digits(Rational(4, 10000000000)) == 0);
  CHECK(round_to_digits(Rational(125, 100), 1) == Rational(13, 10));
  CHECK(round_to_digits(Rational(1, 3), 2) == Rational(33, 100));
  CHECK(from_double(0.1) == Rational(1, 10));
}

TEST_CASE("parse and render round-trip on random decimals") {
  Engine e(11);
  for (int i = 0; i < 1000; ++i) {
    const auto digits = static_cast<int>(uniform_below(e, 13));
    std::string text = std::to_string(uniform_between(e, -100000, 100000));
    if (digits > 0) {
      std::string frac;
      for (int d = 0; d < digits; ++d) frac += static_cast<char>('0' + uniform_below(e, 10));
      text += "." + frac;
    }
    const Rational v = parse_decimal(text);
    CHECK(parse_decimal(to_decimal(v)) == v);
  }
}
