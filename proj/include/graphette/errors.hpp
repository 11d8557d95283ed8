#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace graphette {

/// Caller violated a precondition (bad order, out-of-range node, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (edge lists, literals).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A work bound (subset count, memory) would be exceeded.
class BoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace graphette
