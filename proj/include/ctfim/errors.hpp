#pragma once

#include <stdexcept>
#include <string>

namespace ctfim {

// Bad argument or out-of-domain parameter supplied by the caller.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Evaluation at the g = 1, k = pi/2 Jordan block where the generic formulas break.
class ExceptionalPointError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical procedure could not deliver a trustworthy result.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The request is well-formed but outside what the implementation supports.
class UnsupportedConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ctfim
