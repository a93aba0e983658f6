#include "rdm/error.hpp"

namespace rdm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDimension: return "invalid-dimension";
    case ErrorCode::InvalidSize: return "invalid-size";
    case ErrorCode::OverflowGuard: return "overflow-guard";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::DegenerateGap: return "degenerate-gap";
    case ErrorCode::PrecisionFailure: return "precision-failure";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::SingularPoint: return "singular-point";
    case ErrorCode::ToleranceFailure: return "tolerance-failure";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::UnsupportedDegenerateGround: return "unsupported-degenerate-ground";
    case ErrorCode::StepTooLarge: return "step-too-large";
    case ErrorCode::BracketFailure: return "bracket-failure";
    case ErrorCode::ShellEmpty: return "shell-empty";
    case ErrorCode::EmptyHistogram: return "empty-histogram";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace rdm
