#pragma once

#include <stdexcept>
#include <string>

namespace imspekit {

/// Base class for all imspekit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two design points coincide exactly; the covariance matrix would be singular.
class DuplicatePointError : public Error {
 public:
  using Error::Error;
};

/// A design point lies outside the prediction domain.
class OutOfDomainError : public Error {
 public:
  using Error::Error;
};

/// Factorization failed; carries the estimated 1-norm condition number.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, double cond)
      : Error(what), cond_estimate(cond) {}
  double cond_estimate;
};

/// Tail differences of a sequence do not shrink.
class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A sample coincides exactly with the reference limit.
class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

/// Initial grid suggests the minimum sits outside the requested interval.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Computed IMSPE fell outside (0, 1); indicates a quadrature or
/// conditioning failure that must not be silently clamped away.
class ImspeRangeError : public Error {
 public:
  using Error::Error;
};

}  // namespace imspekit
