#include "rational.hpp"

#include <cmath>

#include "errors.hpp"

namespace pathloop {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::InvalidProblem: return "InvalidProblem";
    case ErrorCode::EmptyPath: return "EmptyPath";
    case ErrorCode::GenerationExhausted: return "GenerationExhausted";
    case ErrorCode::CannotBlock: return "CannotBlock";
    case ErrorCode::Precondition: return "PreconditionViolation";
    case ErrorCode::UnsolvableInBatch: return "UnsolvableInBatch";
    case ErrorCode::NoPathFound: return "NoPathFound";
    case ErrorCode::MalformedPair: return "MalformedPair";
    case ErrorCode::EmptyBundle: return "EmptyBundle";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::Auth: return "AuthError";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::Provider: return "ProviderError";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Cancelled: return "Cancelled";
    case ErrorCode::Internal: return "InternalError";
  }
  return "Unknown";
}

namespace {

mpz_class pow10(int digits) {
  mpz_class result;
  mpz_ui_pow_ui(result.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  return result;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

Rational parse_decimal(std::string_view text) {
  auto fail = [&](const char* why) {
    throw Error(ErrorCode::Parse, std::string(why) + ": '" + std::string(text) + "'");
  };
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  std::size_t int_digits = 0;
  while (pos < text.size() && is_digit(text[pos])) {
    digits.push_back(text[pos++]);
    ++int_digits;
  }
  int frac_digits = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && is_digit(text[pos])) {
      digits.push_back(text[pos++]);
      ++frac_digits;
    }
  }
  if (pos != text.size()) fail("not a decimal number");
  if (digits.empty()) fail("not a decimal number");
  if (int_digits == 0 && frac_digits == 0) fail("not a decimal number");
  if (frac_digits > kMaxInputFractionDigits) fail("too many fractional digits");

  mpz_class numerator(digits, 10);
  if (negative) numerator = -numerator;
  Rational value(numerator, pow10(frac_digits));
  value.canonicalize();
  return value;
}

std::string to_decimal(const Rational& value) {
  mpz_class den = value.get_den();
  int twos = 0;
  int fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1) {
    throw Error(ErrorCode::InvalidArgument,
                "value " + value.get_str() + " has no terminating decimal expansion");
  }
  const int scale = std::max(twos, fives);
  mpz_class scaled = value.get_num() * pow10(scale) / value.get_den();
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string digits = scaled.get_str();
  if (static_cast<int>(digits.size()) <= scale) {
    digits.insert(0, static_cast<std::size_t>(scale) - digits.size() + 1, '0');
  }
  std::string result = digits.substr(0, digits.size() - static_cast<std::size_t>(scale));
  if (scale > 0) {
    std::string frac = digits.substr(digits.size() - static_cast<std::size_t>(scale));
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    if (!frac.empty()) result += "." + frac;
  }
  return negative ? "-" + result : result;
}

Rational round_to_digits(const Rational& value, int digits) {
  const mpz_class scale = pow10(digits);
  Rational shifted = value * scale + Rational(1, 2);
  mpz_class floored;
  mpz_fdiv_q(floored.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  Rational result(floored, scale);
  result.canonicalize();
  return result;
}

Rational from_double(double value, int digits) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::InvalidArgument, "non-finite coordinate");
  }
  return round_to_digits(Rational(value), digits);
}

}  // namespace pathloop
