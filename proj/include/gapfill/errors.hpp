#pragma once

#include <stdexcept>
#include <string>

namespace gapfill {

// Base for all library errors; CLI maps subclasses to exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user-supplied parameters (nonpositive counts, invalid ranges).
struct ConfigError : Error {
  using Error::Error;
};

// A constructed object violates one of its invariants.
struct ValidationError : Error {
  using Error::Error;
};

// Input file does not parse; message carries line/field context.
struct FormatError : Error {
  using Error::Error;
};

// Unknown id passed to an index lookup.
struct LookupError : Error {
  using Error::Error;
};

// Vector/operator size mismatch.
struct DimensionError : Error {
  using Error::Error;
};

// Problem exceeds a hard cap (qubit count, enumeration bound).
struct ResourceError : Error {
  using Error::Error;
};

// Objective coefficients sum to a nonpositive total; normalization undefined.
struct DegenerateInstanceError : ValidationError {
  using ValidationError::ValidationError;
};

// Approximation ratio requested against a nonnegative reference energy.
struct UndefinedRatioError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace gapfill
