#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace discgan {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input or configuration problems. The CLI reports these with exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SchemaError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class VocabularyError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateColumnError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t row, std::string column)
      : ValidationError(what), row_(row), column_(std::move(column)) {}

  // Zero-based data row index (header excluded).
  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

// Runtime failures. The CLI reports these with exit code 1.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class StateError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

class WorkerFailure : public Error {
 public:
  WorkerFailure(const std::string& what, int worker) : Error(what), worker_(worker) {}
  int worker() const noexcept { return worker_; }

 private:
  int worker_;
};

}  // namespace discgan
