#include "mixate/error.hpp"

namespace mixate {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidAlphabet: return "InvalidAlphabet";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kStateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::kInvalidDistribution: return "InvalidDistribution";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidDensity: return "InvalidDensity";
    case ErrorCode::kUnsupportedSlice: return "UnsupportedSlice";
    case ErrorCode::kUnsupportedPoint: return "UnsupportedPoint";
    case ErrorCode::kAbsoluteContinuityViolation:
      return "AbsoluteContinuityViolation";
    case ErrorCode::kInvalidTime: return "InvalidTime";
    case ErrorCode::kDerivativeUndefined: return "DerivativeUndefined";
    case ErrorCode::kBudgetExhausted: return "BudgetExhausted";
    case ErrorCode::kOracleTimeout: return "OracleTimeout";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kInvalidSetup: return "InvalidSetup";
    case ErrorCode::kInvalidParameter: return "InvalidParameter";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace mixate
