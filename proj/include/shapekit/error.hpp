#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shapekit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input was well formed but violates a domain invariant (or a precondition
/// of the requested operation). Maps to exit status 2 in the CLI.
class SemanticError : public Error {
 public:
  using Error::Error;
};

/// A bounded enumeration hit its configured limit. Maps to exit status 3.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::string what, std::size_t limit)
      : Error(what + " exceeded budget " + std::to_string(limit)), limit_(limit) {}
  std::size_t limit() const { return limit_; }

 private:
  std::size_t limit_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace shapekit
