#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mlk {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument to a generator or numerical routine.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed or invalid scenario configuration. The message carries the
/// path to the offending field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A block matrix that was required to be row-regular is not.
class RegularityError : public Error {
 public:
  using Error::Error;
};

/// Random graph generation exhausted its connectivity retry budget.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// Non-finite phases appeared during integration.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// A structural precondition of the stability analysis does not hold
/// (unequal layer sizes, disconnected layer, asymmetric input, ...).
class AssumptionError : public Error {
 public:
  using Error::Error;
};

/// The supplied state is not an equilibrium within the residual gate.
class NotAnEquilibriumError : public Error {
 public:
  NotAnEquilibriumError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace mlk
