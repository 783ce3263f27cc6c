#pragma once

#include <stdexcept>
#include <string>

namespace momentlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An input violates a documented precondition (not symmetric, not SPD, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A matrix or critical point is degenerate where nondegeneracy is required.
class DegenerateError : public Error {
 public:
  explicit DegenerateError(const std::string& what, double measure = 0.0)
      : Error(what), measure_(measure) {}
  /// Smallest singular value / eigenvalue that triggered the error.
  double measure() const noexcept { return measure_; }

 private:
  double measure_;
};

/// An iterative procedure did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what, double residual = 0.0)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Requested object or capability does not exist (unknown model, no closed form, ...).
class NotAvailable : public Error {
 public:
  using Error::Error;
};

}  // namespace momentlab
