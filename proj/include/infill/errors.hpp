#pragma once

#include <stdexcept>
#include <string>

namespace infill {

// Two families: bad caller input (InputError) and numeric breakdown on
// valid input (NumericError). The CLI maps them to exit codes 2 and 3.

class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// n or lambda outside the model's domain.
class DomainError : public InputError {
 public:
  using InputError::InputError;
};

/// Vector/matrix sizes disagree.
class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

/// Time grid not strictly increasing on [0, 1] with both endpoints.
class GridError : public InputError {
 public:
  using InputError::InputError;
};

/// Extremum requested for a curve that has none.
class MonotoneCurveError : public InputError {
 public:
  MonotoneCurveError() : InputError("monotone curve has no interior extremum") {}
};

/// 1 - rho^2 below the conditioning floor.
class ConditioningError : public NumericError {
 public:
  using NumericError::NumericError;
};

class NotPositiveDefiniteError : public NumericError {
 public:
  using NumericError::NumericError;
};

class RankDeficientError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A bounded scan ran off its end without meeting its criterion.
class ScanBoundError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace infill
