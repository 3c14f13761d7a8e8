#pragma once

#include <stdexcept>
#include <string>

namespace dvsb {

// Root of every error the library raises. The CLI maps ConfigError to exit
// code 3 and every other Error to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

// Missing frame index in a numbered frame directory (including empty dirs).
class GapError : public InputError {
 public:
  using InputError::InputError;
};

// Two inputs that must agree in size or count do not.
class ConsistencyError : public InputError {
 public:
  using InputError::InputError;
};

// Malformed structured text. Carries the 1-based line and column.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, int line, int column)
      : InputError(what + " (line " + std::to_string(line) + ", column " +
                   std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Operation requested on an object in the wrong lifecycle state.
class StateError : public Error {
 public:
  using Error::Error;
};

class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

class DegenerateStatistics : public Error {
 public:
  using Error::Error;
};

class DegenerateSignal : public Error {
 public:
  using Error::Error;
};

class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

}  // namespace dvsb
