#pragma once

#include <stdexcept>
#include <string>

namespace oqsim {

/// Invalid argument: out-of-range parameter, dimension mismatch, bad index.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base class for failures of a numerical procedure on valid input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A time-dependent rate diverges at the requested point.
class SingularityError : public NumericalError {
 public:
  SingularityError(const std::string& what, double t) : NumericalError(what), time_(t) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// A dynamical model produced a map that is not completely positive.
class ModelError : public NumericalError {
 public:
  ModelError(const std::string& what, double t) : NumericalError(what), time_(t) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class IntegrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SolverError : public NumericalError {
 public:
  SolverError(const std::string& what, double best_residual)
      : NumericalError(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

}  // namespace oqsim
