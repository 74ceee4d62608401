#pragma once

#include <stdexcept>
#include <string>

namespace pmpqoc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Input parsed but violates a type invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Non-finite values, trace drift, singular systems.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Mismatched dimensions or arguments outside an operation's domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pmpqoc
