#pragma once

#include <stdexcept>
#include <string>

namespace occtime {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad arguments or configuration, detectable before any numerics run.
// The CLI maps these to exit code 2.
struct ValidationError : Error {
  using Error::Error;
};
struct ParseError : ValidationError {
  using ValidationError::ValidationError;
};
struct BadInterval : ValidationError {
  using ValidationError::ValidationError;
};
struct BadAmplitudes : ValidationError {
  using ValidationError::ValidationError;
};
struct NegativeTime : ValidationError {
  using ValidationError::ValidationError;
};
struct BadInitialState : ValidationError {
  using ValidationError::ValidationError;
};

// Numerical failures during evaluation. The CLI maps these to exit code 3.
struct NumericError : Error {
  using Error::Error;
};
struct NotHermitian : NumericError {
  using NumericError::NumericError;
};
struct NotPositive : NumericError {
  using NumericError::NumericError;
};
struct NotProjector : NumericError {
  using NumericError::NumericError;
};
struct ConvergenceFailure : NumericError {
  using NumericError::NumericError;
};
struct EmptySupport : NumericError {
  using NumericError::NumericError;
};
struct DimensionMismatch : NumericError {
  using NumericError::NumericError;
};
struct DimensionOverflow : NumericError {
  using NumericError::NumericError;
};
struct ZeroCondition : NumericError {
  using NumericError::NumericError;
};
struct NoOutcome : NumericError {
  using NumericError::NumericError;
};
struct SupportLeakage : NumericError {
  using NumericError::NumericError;
};
struct QuadratureBudgetExceeded : NumericError {
  using NumericError::NumericError;
};

// Filesystem problems while writing reports. Exit code 4.
struct IoError : Error {
  using Error::Error;
};

}  // namespace occtime
