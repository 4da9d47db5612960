#pragma once

#include <stdexcept>
#include <string>

namespace nominal {

/// Caller violated an operation's precondition (size mismatch, wrong backend, ...).
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Input was well-formed but violates a semantic invariant
/// (e.g. a local symmetry that is not made of automorphisms).
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Text input could not be parsed. Carries a 1-based position.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(format(what, line, column)), message_(what), line_(line), column_(column) {}

  /// The description without the position prefix.
  const std::string& message() const { return message_; }
  int line() const { return line_; }
  int column() const { return column_; }

private:
  static std::string format(const std::string& what, int line, int column) {
    if (line <= 0)
      return what;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
  }

  std::string message_;
  int line_;
  int column_;
};

} // namespace nominal
