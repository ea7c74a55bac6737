#pragma once

#include <stdexcept>
#include <string>

namespace relsub {

// Bad inputs: invalid configs, malformed files, violated preconditions.
// The CLI maps these to exit code 1.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Failures of the numerics at runtime: singular matrices, degenerate draws,
// non-finite evaluations. The CLI maps these to exit code 2.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonFiniteDensity : NumericalError {
  using NumericalError::NumericalError;
};
struct NonFiniteValue : NumericalError {
  using NumericalError::NumericalError;
};
struct IntegrationFailure : NumericalError {
  using NumericalError::NumericalError;
};
struct EmptyDataset : ValidationError {
  EmptyDataset() : ValidationError("dataset is empty") {}
};
struct ZeroProbabilityDraw : ValidationError {
  using ValidationError::ValidationError;
};
struct InsufficientSubsampleSize : ValidationError {
  using ValidationError::ValidationError;
};
struct SubsampleTooSmall : ValidationError {
  using ValidationError::ValidationError;
};
struct AllScoresZero : NumericalError {
  AllScoresZero() : NumericalError("every score norm is zero; probabilities undefined") {}
};
struct SingularInformationMatrix : NumericalError {
  SingularInformationMatrix() : NumericalError("information matrix is singular") {}
};
struct SingularMHat : NumericalError {
  SingularMHat() : NumericalError("subsample M-hat is singular") {}
};
struct NoCensoredUnits : ValidationError {
  NoCensoredUnits() : ValidationError("dataset has no censored units") {}
};
struct NoUncensoredData : ValidationError {
  NoUncensoredData() : ValidationError("dataset has no uncensored units") {}
};
struct NoUncensoredDraws : NumericalError {
  NoUncensoredDraws() : NumericalError("all drawn units are censored; model unidentifiable on draw") {}
};
struct PilotFailed : NumericalError {
  using NumericalError::NumericalError;
};
struct ObjectiveNonFiniteAtStart : NumericalError {
  ObjectiveNonFiniteAtStart() : NumericalError("objective is not finite at the starting point") {}
};
struct RejectionBudgetExceeded : NumericalError {
  using NumericalError::NumericalError;
};
struct CalibrationFailed : NumericalError {
  using NumericalError::NumericalError;
};
struct MalformedRow : ValidationError {
  MalformedRow(std::size_t line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_number(line) {}
  std::size_t line_number;
};
struct EmptyFile : ValidationError {
  using ValidationError::ValidationError;
};
struct ConfigError : ValidationError {
  using ValidationError::ValidationError;
};

}  // namespace relsub
