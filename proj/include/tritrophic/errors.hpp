#pragma once

#include <stdexcept>
#include <string>

namespace tritrophic {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation outside the domain of a formula (vanishing Holling
/// denominator, missing equilibrium, invalid parameter).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A degenerate-Hopf parameter constraint cannot be met.
class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical procedure failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Step-size underflow, step budget exhausted or a non-finite state.
class IntegrationError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Time-to-angle reparametrization is invalid (theta-dot too small).
class ReparametrizationError : public Error {
 public:
  using Error::Error;
};

/// Malformed or incomplete user configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace tritrophic
