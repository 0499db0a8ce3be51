#pragma once
#include <stdexcept>
#include <string>

namespace purify {

// Base of everything thrown on purpose. The CLI maps subclasses to exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user input: unknown family id, malformed config, unreadable gate file.
struct ConfigError : Error {
  using Error::Error;
};

// A matrix failed a structural check (hermiticity, trace, positivity, unitarity).
struct ValidationError : Error {
  using Error::Error;
};

// An angle component lies outside its closed interval.
struct BoundsError : Error {
  using Error::Error;
};

// An iterative routine failed to converge or a tolerance contract was violated.
struct NumericalError : Error {
  using Error::Error;
};

// The protocol produced no usable branch, or too many ensemble members died.
struct DegeneracyError : Error {
  using Error::Error;
};

}  // namespace purify
