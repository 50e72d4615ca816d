#pragma once

#include <stdexcept>
#include <string>

namespace iscrc {

/// Base class for every error this library throws.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad inputs: files, matrices, configs, dimension mismatches. CLI exit code 2.
class DataError : public Error {
public:
  using Error::Error;
};

/// Dimension mismatch between operands; the message names the offender.
class DimensionError : public DataError {
public:
  using DataError::DataError;
};

/// Failures inside an optimization routine. CLI exit code 3.
class SolverError : public Error {
public:
  using Error::Error;
};

}  // namespace iscrc
