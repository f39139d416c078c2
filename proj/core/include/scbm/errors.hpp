#pragma once

#include <stdexcept>
#include <string>

namespace scbm {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid argument, violated type invariant, or violated precondition.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

/// Malformed or unusable input data (files, configs).
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(what) {}
};

/// Iterative method failed to converge. Carries the last residual so callers
/// can report how far the iteration got.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace scbm
