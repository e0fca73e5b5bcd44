#pragma once

#include <stdexcept>
#include <string>

namespace bakerlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates an operation's precondition
/// (odd N, parameter out of range, point outside a domain, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A sampling grid cannot resolve the requested function or frequency range.
class ResolutionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Strict-mode classical iteration landed on a discontinuity line.
class DiscontinuityError : public ValidationError {
 public:
  DiscontinuityError(const std::string& what, long step)
      : ValidationError(what), step_(step) {}
  /// Zero-based index of the offending step.
  long step() const noexcept { return step_; }

 private:
  long step_;
};

/// A numerical contract (unitarity, orthonormality, convergence) failed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Throws ValidationError with `message` unless `condition` holds.
void require(bool condition, const std::string& message);

}  // namespace bakerlab
