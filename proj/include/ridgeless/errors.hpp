#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ridgeless {

// Shapes of the operands do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of the operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, int iterations)
      : std::runtime_error(what), iterations_(iterations) {}
  explicit NumericalError(const std::string& what) : NumericalError(what, 0) {}

  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

// f(lo) and f(hi) do not bracket a root.
class BracketError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// The requested quantity does not exist for this input (e.g. M exceeds rank).
class InfeasibleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Two objects that must share state (a feature map, a class list) do not.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class BoundsError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace ridgeless
