#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace grafield {

/// Coarse failure category. The CLI maps these onto process exit codes.
enum class ErrorKind {
  Validation,  // bad arguments or malformed graph
  Data,        // IO, parsing, download, checksum
  Numerical,   // solver breakdown, degenerate estimator
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

/// Raised by estimators that divide by a vertex degree of zero.
class IsolatedVertexError : public ValidationError {
 public:
  IsolatedVertexError(std::size_t index, std::string label)
      : ValidationError("vertex '" + label + "' has zero degree; use a smoothed estimator (tau > 0)"),
        index_(index),
        label_(std::move(label)) {}
  std::size_t index() const noexcept { return index_; }
  const std::string& label() const noexcept { return label_; }

 private:
  std::size_t index_;
  std::string label_;
};

/// The data-driven shrinkage parameter has a zero or negative denominator.
class DegenerateTauError : public NumericalError {
 public:
  explicit DegenerateTauError(const std::string& what) : NumericalError(what) {}
};

}  // namespace grafield
