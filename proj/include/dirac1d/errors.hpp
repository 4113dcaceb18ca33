#pragma once

#include <stdexcept>
#include <string>

namespace dirac1d {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidModeError : public Error {
 public:
  using Error::Error;
};

class InvalidMomentumError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Raised before any Fock-space allocation that would exceed the dimension ceiling.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

}  // namespace dirac1d
