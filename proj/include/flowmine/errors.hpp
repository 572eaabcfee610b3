#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flowmine {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed trace or message text. Carries the 1-based line number when known.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// Invalid configuration (roles, generator profile, option values).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Input data does not satisfy an operation's requirements.
class DataError : public Error {
public:
  using Error::Error;
};

/// A configured resource cap was exceeded (e.g. path enumeration).
class LimitError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace flowmine
