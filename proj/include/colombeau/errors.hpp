#pragma once

#include <stdexcept>
#include <string>

namespace colombeau {

/// Precondition violated by the caller (bad radius, eps outside (0,1), odd q, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed expression or configuration JSON.
class ParseError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A numerical routine could not reach its tolerance; the message carries diagnostics.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace colombeau
