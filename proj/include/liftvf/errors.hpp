#pragma once

#include <stdexcept>
#include <string>

namespace liftvf {

// Exit codes of the command-line tool; every library error carries one.
enum class ExitCode : int { Ok = 0, HypothesisViolated = 1, CapReached = 2, InputError = 3, ConsistencyFailure = 4 };

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

class HypothesisError : public Error {
 public:
  explicit HypothesisError(const std::string& what) : Error(ExitCode::HypothesisViolated, what) {}
};

class CapReachedError : public Error {
 public:
  explicit CapReachedError(const std::string& what) : Error(ExitCode::CapReached, what) {}
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ExitCode::InputError, what) {}
};

class ParseError : public InputError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : InputError(std::to_string(line) + ":" + std::to_string(column) + ": " + what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ConsistencyError : public Error {
 public:
  explicit ConsistencyError(const std::string& what) : Error(ExitCode::ConsistencyFailure, what) {}
};

}  // namespace liftvf
