#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cuefid {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document. `line` is 1-based; 0 when not applicable.
class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Arguments outside an operation's precondition.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

}  // namespace cuefid
