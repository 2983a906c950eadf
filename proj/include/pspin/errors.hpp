#pragma once

#include <stdexcept>
#include <string>

namespace pspin {

// Bad input: parameters outside a module's preconditions.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure could not produce a trustworthy answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoDiscontinuity : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ApproximationInvalid : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace pspin
