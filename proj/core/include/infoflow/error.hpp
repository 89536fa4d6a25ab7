#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace infoflow {

/// Failure categories reported by the library. The CLI maps each one onto an
/// exit code, so the set is part of the scripting contract.
enum class ErrorCode {
  InvalidArgument,
  EmptyFile,
  MissingColumn,
  NonFiniteValue,
  LengthMismatch,
  DtMismatch,
  TooShortAfterSubsample,
  WindowOutOfRange,
  WindowTooShort,
  ManifestError,
  DegenerateSeries,
  CollinearSeries,
  SingularFisher,
  DegenerateVariance,
  NonPositiveVariance,
  NotHurwitz,
  NonFiniteState,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for failures caused by the numbers themselves rather than by bad
/// input (collinearity, singular information matrix, instability, ...).
bool is_numerical(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace infoflow
