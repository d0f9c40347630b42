#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tandemq {

enum class ErrorCode {
  NonPositiveRate,
  NegativeBuffer,
  LengthMismatch,
  EmptySystem,
  StateSpaceTooLarge,
  Overflow,
  InvalidPhase,
  IndexOutOfRange,
  IneligibleServer,
  SingularSystem,
  NonPositiveSolution,
  NegativeArrivalRate,
  TargetTooSmall,
  InvalidArgument,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveRate: return "NonPositiveRate";
    case ErrorCode::NegativeBuffer: return "NegativeBuffer";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptySystem: return "EmptySystem";
    case ErrorCode::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::InvalidPhase: return "InvalidPhase";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::IneligibleServer: return "IneligibleServer";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NonPositiveSolution: return "NonPositiveSolution";
    case ErrorCode::NegativeArrivalRate: return "NegativeArrivalRate";
    case ErrorCode::TargetTooSmall: return "TargetTooSmall";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Numerical failures (as opposed to bad input) map to a distinct CLI exit code.
inline bool is_numerical(ErrorCode code) {
  return code == ErrorCode::SingularSystem || code == ErrorCode::NonPositiveSolution;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tandemq
