#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace pathloop {

using Rational = mpq_class;

// Maximum number of fractional digits accepted from textual input.
inline constexpr int kMaxInputFractionDigits = 12;

// Digits kept when a computed (possibly irrational) quantity is snapped back
// onto a decimal grid.
inline constexpr int kGridDigits = 9;

// Parses "[+-]digits[.digits]" (".5" and "5." accepted) into an exact rational.
// Throws Error{Parse} on malformed text or more than kMaxInputFractionDigits
// fractional digits.
Rational parse_decimal(std::string_view text);

// Exact decimal rendering without trailing zeros. Throws Error{InvalidArgument}
// if the value has no terminating decimal expansion.
std::string to_decimal(const Rational& value);

// Rounds half-up onto the 10^-digits grid.
Rational round_to_digits(const Rational& value, int digits = kGridDigits);

// Snaps a double onto the 10^-digits grid.
Rational from_double(double value, int digits = kGridDigits);

inline double to_double(const Rational& value) { return value.get_d(); }

}  // namespace pathloop
