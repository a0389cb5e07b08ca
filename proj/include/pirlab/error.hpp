#pragma once

#include <stdexcept>
#include <string>

namespace pirlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Exhaustive search refused because the instance is above its size guard.
class GuardError : public Error {
 public:
  using Error::Error;
};

/// Shapes or index ranges that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A retrieval plan, hint, or protocol selector that violates its invariants.
class PlanError : public Error {
 public:
  using Error::Error;
};

}  // namespace pirlab
