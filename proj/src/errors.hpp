#pragma once

#include <stdexcept>
#include <string>

namespace pathloop {

enum class ErrorCode {
  InvalidArgument = 1,
  Parse = 2,
  InvalidProblem = 3,
  EmptyPath = 4,
  GenerationExhausted = 5,
  CannotBlock = 6,
  Precondition = 7,
  UnsolvableInBatch = 8,
  NoPathFound = 9,
  MalformedPair = 10,
  EmptyBundle = 11,
  EmptyInput = 12,
  Auth = 13,
  RateLimited = 14,
  Timeout = 15,
  Provider = 16,
  Io = 17,
  Cancelled = 18,
  Internal = 99,
};

const char* error_code_name(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// C layer can map it to a status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pathloop
