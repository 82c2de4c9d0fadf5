#pragma once

#include <stdexcept>
#include <string>

namespace ewc {

/// Raised when an argument violates a documented precondition or type invariant.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when the mean direction is requested for a distribution with E(Z) = 0.
class UndefinedMeanError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Raised when an iterative numerical procedure fails (non-convergence, step budget).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ewc
