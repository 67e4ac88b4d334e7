#pragma once

#include <stdexcept>
#include <string>

namespace radcal {

enum class ErrorCode {
  kInvalidArgument,
  kCountMismatch,
  kTooFewPoses,
  kDegenerateGeometry,
  kDimensionMismatch,
  kLengthMismatch,
  kEmptyInput,
  kFovInfeasible,
  kParse,   // malformed data file (corners, frames, masks, labels, calibration)
  kConfig,  // malformed parameter or scene configuration
  kIo,
};

const char* to_string(ErrorCode code) noexcept;

/// Library-wide exception. The code is what the CLI maps onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace radcal
