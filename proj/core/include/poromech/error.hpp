#pragma once

#include <stdexcept>
#include <string>

namespace poromech {

enum class ErrorKind {
  invalid_argument,
  degenerate_mesh,
  degenerate_cell,
  parse_error,
  tpfa_inapplicable,
  partition_impossible,
  disconnected_region,
  rigid_mode,
  numerical_breakdown,
  non_convergence,
  preconditioner_build,
  internal,
};

const char* to_string(ErrorKind kind) noexcept;

/// Library-wide exception. Every failure mode the library detects is
/// reported through this type; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure with the offending 1-based line number.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(ErrorKind::parse_error, "line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace poromech
