#pragma once

#include <stdexcept>
#include <string>

namespace zebra {

// Base for every error raised by the library. The CLI maps InvalidArgument to
// exit status 2 and everything else to 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A precondition on internal state does not hold (no recognition yet,
// staircase already finished, ...).
class StateError : public Error {
 public:
  using Error::Error;
};

}  // namespace zebra
