#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rrsel {

enum class ErrorCode {
  RankDeficient,
  IndexOutOfRange,
  DimensionMismatch,
  EmptyBasis,
  NonFinite,
  DomainError,
  NotPowerOfTwo,
  K0TooLarge,
  SpecMismatch,
  ZeroSignal,
  K0ExceedsPath,
  EmptyPath,
  LengthMismatch,
  TooManySubsets,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI, the simulation driver) can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rrsel
