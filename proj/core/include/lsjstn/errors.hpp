#pragma once

#include <stdexcept>
#include <string>

namespace lsjstn {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incompatible matrix/operand shapes. The message names both shapes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An argument value outside its contract (e.g. sigma <= 0).
class ValueError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input files (CSV, manifest, checkpoint).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid or unknown configuration keys/values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Non-finite value detected where a finite one is required.
class NumericError : public Error {
 public:
  using Error::Error;
};

inline std::string shape_str(int rows, int cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

}  // namespace lsjstn
