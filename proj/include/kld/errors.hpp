#pragma once

#include <stdexcept>
#include <string>

namespace kld {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid user input: bad Coxeter matrix, inconsistent weights, bad prime, ...
struct ConfigError : Error {
  using Error::Error;
};

// Fixed-width integer arithmetic left the representable range.
struct OverflowError : Error {
  using Error::Error;
};

// A condition that is a theorem failed; indicates a bug, never user error.
struct InternalError : Error {
  using Error::Error;
};

}  // namespace kld
