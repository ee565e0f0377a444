#pragma once

#include <stdexcept>
#include <string>

namespace torusmhd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Array shape or dimension does not match the grid.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The background vector has b.j == 0 for some enumerated lattice point.
class ResonanceError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or runaway norms during time integration.
class BlowUpError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration (unknown key, bad value, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace torusmhd
