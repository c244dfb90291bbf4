#include "dyca/error.hpp"

namespace dyca {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kWindowTooLong: return "WindowTooLong";
    case ErrorCode::kInvalidBand: return "InvalidBand";
    case ErrorCode::kSingular: return "Singular";
    case ErrorCode::kNoComponents: return "NoComponents";
    case ErrorCode::kSingularGram: return "SingularGram";
    case ErrorCode::kDegenerateU: return "DegenerateU";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kStepFailure: return "StepFailure";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kRaggedRows: return "RaggedRows";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kUnknownKey: return "UnknownKey";
    case ErrorCode::kBadValue: return "BadValue";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code) {}

}  // namespace dyca
