#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace h2e {

/// Base of every error thrown by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed basis-set text. Carries the 1-based line number (0 when the
/// problem is not tied to a line, e.g. an empty document).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line),
        detail_(what) {}
  std::size_t line() const noexcept { return line_; }
  /// The message without the line prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent inputs, e.g. an element missing from the basis set.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class LinearDependenceError : public Error {
 public:
  using Error::Error;
};

/// E_HF < E_FCI beyond tolerance; always indicates an upstream bug.
class VariationalViolation : public Error {
 public:
  using Error::Error;
};

/// SCF iteration did not reach its convergence criteria.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A computed quantity broke an invariant it must satisfy by construction.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace h2e
