#pragma once

#include <stdexcept>
#include <string>

namespace slipgen {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (CSV rows, config documents).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Geometry that violates a patch or grid invariant.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Geometry the deformation model cannot handle (e.g. a patch breaking the surface).
class UnsupportedGeometryError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Invalid run configuration; carries the offending field path in the message.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateTaperError : public DomainError {
 public:
  using DomainError::DomainError;
};

class TruncationError : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnsupportedDistributionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DegenerateSampleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Numerical breakdown during a computation.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NotPositiveSemidefiniteError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// exp() of a lognormal exponent would overflow.
class SaturationError : public NumericalError {
 public:
  SaturationError(const std::string& what, double max_exponent)
      : NumericalError(what), max_exponent_(max_exponent) {}
  double max_exponent() const noexcept { return max_exponent_; }

 private:
  double max_exponent_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace slipgen
