#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fpa {

enum class ErrorKind {
  DimensionMismatch,
  InvalidModulus,
  InvalidQuotient,
  ModulusMismatch,
  Parse,
  InsufficientPrecision,
  OutOfWindow,
  ShapeMismatch,
  WindowTooNarrow,
  NotOrderP,
  NonCommuting,
  MalformedSpec,
  NotUnipotent,
  NonInvariant,
  SingularGenerator,
  InvariantViolation,
  EmptyFixedSpace,
  BudgetExceeded,
  UnknownExample,
  Io,
};

/// Stable machine-readable tag, used in CLI failure reasons and JSON reports.
std::string_view error_tag(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Syntax error in a series literal; `position()` is the 0-based byte offset.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error(ErrorKind::Parse, message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace fpa
