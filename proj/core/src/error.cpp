#include "infoflow/error.hpp"

namespace infoflow {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DtMismatch: return "DtMismatch";
    case ErrorCode::TooShortAfterSubsample: return "TooShortAfterSubsample";
    case ErrorCode::WindowOutOfRange: return "WindowOutOfRange";
    case ErrorCode::WindowTooShort: return "WindowTooShort";
    case ErrorCode::ManifestError: return "ManifestError";
    case ErrorCode::DegenerateSeries: return "DegenerateSeries";
    case ErrorCode::CollinearSeries: return "CollinearSeries";
    case ErrorCode::SingularFisher: return "SingularFisher";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::NonPositiveVariance: return "NonPositiveVariance";
    case ErrorCode::NotHurwitz: return "NotHurwitz";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DegenerateSeries:
    case ErrorCode::CollinearSeries:
    case ErrorCode::SingularFisher:
    case ErrorCode::DegenerateVariance:
    case ErrorCode::NonPositiveVariance:
    case ErrorCode::NotHurwitz:
    case ErrorCode::NonFiniteState:
      return true;
    default:
      return false;
  }
}

}  // namespace infoflow
