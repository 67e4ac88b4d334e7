#include "radcal/error.hpp"

namespace radcal {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kCountMismatch: return "CountMismatch";
    case ErrorCode::kTooFewPoses: return "TooFewPoses";
    case ErrorCode::kDegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kFovInfeasible: return "FovInfeasible";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

}  // namespace radcal
