#pragma once

#include <stdexcept>
#include <string>

namespace chaosvar {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an exact enumeration would exceed its configured work budget.
// Callers are expected to fall back to a sampling estimator.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Monte Carlo error above threshold, failed square root, divergent quadrature.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace chaosvar
