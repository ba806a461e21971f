#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fedsel {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied argument is outside its documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Not enough rows to honour a request (e.g. more clients than samples).
class InsufficientDataError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. `line()` is 1-based; 0 means "whole file".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Node-wise regression left no residual variance for a column.
class DegenerateColumnError : public Error {
 public:
  DegenerateColumnError(std::size_t column, double a2)
      : Error("degenerate design column " + std::to_string(column) +
              " (a^2 = " + std::to_string(a2) + ")"),
        column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Local gradient descent blew up; the step size is too large.
class StepSizeError : public Error {
 public:
  using Error::Error;
};

// Experiment configuration failed validation; `path()` names the field.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct ClientFailure {
  std::size_t client_id;
  std::string message;
};

// One or more clients failed during stage one; the run was aborted.
class ClientFailureError : public Error {
 public:
  explicit ClientFailureError(std::vector<ClientFailure> failures);
  const std::vector<ClientFailure>& failures() const noexcept { return failures_; }

 private:
  std::vector<ClientFailure> failures_;
};

}  // namespace fedsel
