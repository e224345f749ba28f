#pragma once

#include <stdexcept>
#include <string>

namespace tripletctl {

// Bad input: malformed parameters, out-of-domain arguments, wrong method for a
// waveform. The CLI maps these to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation ran but its result cannot be trusted. The CLI maps these to
// exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class MethodMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonUnitaryDrift : public NumericError {
 public:
  using NumericError::NumericError;
};

class NoConvergence : public NumericError {
 public:
  using NumericError::NumericError;
};

class InfeasibleResult : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace tripletctl
