#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rdm {

enum class ErrorCode {
  InvalidDimension,
  InvalidSize,
  OverflowGuard,
  InvalidArgument,
  DegenerateGap,
  PrecisionFailure,
  Domain,
  SingularPoint,
  ToleranceFailure,
  Unsupported,
  UnsupportedDegenerateGround,
  StepTooLarge,
  BracketFailure,
  ShellEmpty,
  EmptyHistogram,
  Parse,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. Every failure the contracts name carries a code so
/// callers (and the CLI exit-code mapping) can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace rdm
