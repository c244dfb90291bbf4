#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dyca {

enum class ErrorCode {
  kNotPositiveDefinite,
  kNoConvergence,
  kDimensionMismatch,
  kEmptyInput,
  kTooShort,
  kWindowTooLong,
  kInvalidBand,
  kSingular,
  kNoComponents,
  kSingularGram,
  kDegenerateU,
  kKTooLarge,
  kStepFailure,
  kParseError,
  kRaggedRows,
  kNonFinite,
  kIoError,
  kUnknownKey,
  kBadValue,
  kInvalidArgument,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; code() identifies
// the failure class named in the module contracts.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dyca
