#pragma once

#include <stdexcept>
#include <string>

namespace toda_kdq {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied an argument outside the operation's domain (bad dimension,
// invalid harmonic index, malformed measure, unnormalized state, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A well-posed request failed numerically: poles, singular systems,
// positivity loss during integration, evaluation outside a convergence
// region, overflow.
class NumericError : public Error {
 public:
  using Error::Error;
};

class PoleError : public NumericError {
 public:
  using NumericError::NumericError;
};

class SingularSystemError : public NumericError {
 public:
  using NumericError::NumericError;
};

class RankDeficiencyError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ConvergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

class PositivityError : public NumericError {
 public:
  using NumericError::NumericError;
};

class OverflowError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace toda_kdq
