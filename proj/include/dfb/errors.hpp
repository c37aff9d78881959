#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dfb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed fluent text. position is a 0-based byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class UnknownPredicate : public Error {
 public:
  using Error::Error;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

// A constant or effect value outside the relevant property domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class MissingVariable : public Error {
 public:
  using Error::Error;
};

// A fluent asserted with positive confidence has no consistent tuple left.
class Contradiction : public Error {
 public:
  using Error::Error;
};

class UnknownVariable : public Error {
 public:
  using Error::Error;
};

class QuerySpansFactors : public Error {
 public:
  using Error::Error;
};

class SearchExhausted : public Error {
 public:
  using Error::Error;
};

// An operator applied where the simulator cannot execute it.
class ActionError : public Error {
 public:
  using Error::Error;
};

class NoPlan : public Error {
 public:
  using Error::Error;
};

}  // namespace dfb
