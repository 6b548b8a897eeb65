#pragma once

#include <stdexcept>
#include <string>

namespace opforge {

enum class ErrorCode {
  DimensionMismatch,
  LinearlyDependentBasis,
  IllConditioned,
  NotInjective,
  SolverFailure,
  LevelExceeded,
  KernelNotSubspace,
  NonpositiveScale,
  RandomnessExhausted,
  BudgetExhausted,
  ExtensionFailure,
  NotAuerbachComparable,
  BadInput,
};

const char* error_code_name(ErrorCode c);

// Domain error. CLI maps these to exit code 1 with a structured JSON record.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::LinearlyDependentBasis: return "LinearlyDependentBasis";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::NotInjective: return "NotInjective";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::LevelExceeded: return "LevelExceeded";
    case ErrorCode::KernelNotSubspace: return "KernelNotSubspace";
    case ErrorCode::NonpositiveScale: return "NonpositiveScale";
    case ErrorCode::RandomnessExhausted: return "RandomnessExhausted";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::ExtensionFailure: return "ExtensionFailure";
    case ErrorCode::NotAuerbachComparable: return "NotAuerbachComparable";
    case ErrorCode::BadInput: return "BadInput";
  }
  return "Unknown";
}

}  // namespace opforge
