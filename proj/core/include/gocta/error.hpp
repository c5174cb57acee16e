#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gocta {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `offset` is a byte offset into the parsed text,
/// `line` is 1-based when the input is line oriented (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset, std::size_t line = 0)
      : Error(format(message, offset, line)), offset_(offset), line_(line) {}

  std::size_t offset() const { return offset_; }
  std::size_t line() const { return line_; }

 private:
  static std::string format(const std::string& message, std::size_t offset, std::size_t line) {
    if (line != 0) return "line " + std::to_string(line) + ": " + message;
    return "offset " + std::to_string(offset) + ": " + message;
  }

  std::size_t offset_;
  std::size_t line_;
};

/// An operation was called on an input outside its domain
/// (non-normalized automaton, arity mismatch, unknown symbol, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A search exceeded its configured node budget or counter arithmetic
/// overflowed. Distinct from a negative answer.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace gocta
