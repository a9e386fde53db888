#pragma once

#include <stdexcept>
#include <string>

namespace fdbp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration (bad parameters, unknown formats,
/// violated divisibility rules).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// A sample grid cannot represent the requested band.
class BandwidthError : public Error {
public:
  using Error::Error;
};

/// Rate conversion would discard in-band energy.
class AliasingError : public BandwidthError {
public:
  using BandwidthError::BandwidthError;
};

/// Operands with incompatible shapes or grids.
class ShapeError : public Error {
public:
  using Error::Error;
};

/// Non-finite samples, undefined estimates and similar numerical failures.
class NumericError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace fdbp
