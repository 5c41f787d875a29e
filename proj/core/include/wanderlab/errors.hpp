#pragma once

// Exception hierarchy shared by all modules. Every failure mode named in the
// public API maps to exactly one of these types so callers (and the CLI's
// exit-code contract) can distinguish bad input from failed certification.

#include <stdexcept>
#include <string>

namespace wanderlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the supported numeric range (e.g. n too large for compute_a).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Tower value would exceed the level cap.
class LevelOverflow : public RangeError {
 public:
  using RangeError::RangeError;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Parameter set or call sequence violates a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A certified verdict could not be established. Never converted to a pass.
class CertificationError : public Error {
 public:
  CertificationError(const std::string& what, int step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

}  // namespace wanderlab
