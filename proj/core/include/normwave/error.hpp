#pragma once

#include <stdexcept>
#include <string>

namespace normwave {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fields on different grids, wrong component counts, malformed parameters.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A quotient or projection whose denominator (the quartic term B) is not positive.
class UndefinedQuotient : public Error {
 public:
  using Error::Error;
};

/// Resampling or rescaling that would push non-negligible mass off the grid.
class TailError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver failures. `kind` lets callers map failures to exit codes.
class SolverError : public Error {
 public:
  enum class Kind { bracket, residual, no_convergence, collapse, singular, divergence, blowup };

  SolverError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace normwave
