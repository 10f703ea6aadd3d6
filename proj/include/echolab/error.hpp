#pragma once

#include <stdexcept>
#include <string>

namespace echolab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad caller input (dimensions, regions, parameters out of domain).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidDimension : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class InvalidRegion : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class EmptyEnsemble : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A computation ran but its result cannot be trusted.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class FitDomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InsufficientData : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UnreliableDerivative : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double residual)
      : NumericalError(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class TruncationError : public NumericalError {
 public:
  TruncationError(const std::string& what, int suggested_n_max)
      : NumericalError(what), suggested_n_max_(suggested_n_max) {}
  int suggested_n_max() const { return suggested_n_max_; }

 private:
  int suggested_n_max_;
};

/// Experiment configuration problem; carries the offending field name.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace echolab
