#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace insight {

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// File-system level failures (missing file, short read, write failure).
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

enum class ParseErrorKind {
  BadMagic,
  BadVersion,
  Truncated,
  TrailingData,
  DimensionOverflow,
  NonFinite,
  BadSyntax,
  BadSchema,
};

/// Malformed byte streams or documents. `line` is 1-based when known.
class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        kind_(kind),
        line_(line) {}

  ParseErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
};

/// Inputs that parse but violate a documented contract.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

}  // namespace insight
