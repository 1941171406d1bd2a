#ifndef MINIMAX_ERRORS_HPP
#define MINIMAX_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace minimax {

/// Point outside the declared domain of a multifunction, payoff or probe family.
class DomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Extremum requested over an empty set.
class EmptySetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Undefined extended-real operation, e.g. (+inf) + (-inf).
class ExtRealArithmeticError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Problem-file syntax or scope error. Line and column are 1-based and point
/// at the first offending character.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, std::size_t column, std::string message, std::string expected = {})
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line), column_(column), message_(std::move(message)), expected_(std::move(expected)) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }
  const std::string& expected() const noexcept { return expected_; }

private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
  std::string expected_;
};

/// Runtime failure while evaluating a problem-file expression.
class EvalError : public std::runtime_error {
public:
  enum class Kind { DivisionByZero, NoGuardMatched, TypeMismatch };

  EvalError(Kind kind, std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        kind_(kind), line_(line), column_(column) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace minimax

#endif  // MINIMAX_ERRORS_HPP
