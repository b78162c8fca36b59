#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rosce {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration: bad basis spec, bad option values, schema problems.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A location or parameter outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Non-finite or otherwise malformed input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Factorization failure, non-PD covariance and similar.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The (residualized) exposure carries no variation to identify an effect.
class DegenerateExposureError : public Error {
 public:
  using Error::Error;
};

/// Discrete regions without observations where an estimator needs them.
class MissingRegionError : public Error {
 public:
  MissingRegionError(const std::string& what, std::vector<int> regions)
      : Error(what), regions_(std::move(regions)) {}

  const std::vector<int>& regions() const noexcept { return regions_; }

 private:
  std::vector<int> regions_;
};

}  // namespace rosce
