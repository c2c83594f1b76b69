#pragma once

#include <stdexcept>
#include <string>

namespace dpmc {

/// Base class for all toolkit errors. Configuration problems derive from
/// ConfigError, everything else is a NumericalError; the CLI maps the two
/// branches to distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Density mass below the representable threshold (non-overlapping shards).
class ZeroMassError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotNormalizedError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateRangeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BandwidthZeroError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularCovarianceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ShapeMismatchError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class GridMismatchError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateWeightsError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ChainDiagnosticError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ZeroNormError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MissingDensitiesError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace dpmc
