#pragma once

#include <stdexcept>
#include <string>

namespace plaqperc {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The configuration has no top-bottom separating plaquette set.
class NotSeparating : public Error {
 public:
  NotSeparating() : Error("configuration does not separate top from bottom") {}
  using Error::Error;
};

// An exhaustive search or exact routine was asked to exceed its size guard.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

class ArithmeticOverflow : public Error {
 public:
  using Error::Error;
};

class InvalidSurface : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace plaqperc
