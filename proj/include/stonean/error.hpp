#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stonean {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (bad labels, invalid topology, unknown names).
class InputError : public Error {
 public:
  using Error::Error;
};

/// An operation was applied outside its precondition (non-open map, non-separated presheaf...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Elements of two different boolean algebras were combined or compared.
class AlgebraMismatch : public Error {
 public:
  using Error::Error;
};

enum class ParseErrorKind { Syntax, UnknownSymbol, ArityMismatch };

class ParseError : public InputError {
 public:
  ParseError(ParseErrorKind kind, std::size_t position, const std::string& message)
      : InputError(message + " at position " + std::to_string(position)),
        kind_(kind),
        position_(position) {}

  ParseErrorKind kind() const { return kind_; }
  std::size_t position() const { return position_; }

 private:
  ParseErrorKind kind_;
  std::size_t position_;
};

}  // namespace stonean
