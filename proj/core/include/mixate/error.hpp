#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mixate {

enum class ErrorCode {
  kInvalidAlphabet,
  kInvalidConfig,
  kStateSpaceTooLarge,
  kInvalidDistribution,
  kDimensionMismatch,
  kInvalidDensity,
  kUnsupportedSlice,
  kUnsupportedPoint,
  kAbsoluteContinuityViolation,
  kInvalidTime,
  kDerivativeUndefined,
  kBudgetExhausted,
  kOracleTimeout,
  kInvalidSpec,
  kInvalidSetup,
  kInvalidParameter,
  kParseError,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; callers switch on
// code() rather than on the message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mixate
