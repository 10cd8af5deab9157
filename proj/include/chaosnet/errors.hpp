#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace chaosnet {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A numeric argument violated its domain (x outside [0,1], b outside (0,1), ...).
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// Two containers that must agree in shape do not.
class DimensionMismatchError : public Error {
public:
  using Error::Error;
};

/// The chaotic trajectory never entered the epsilon neighborhood of the
/// stimulus within max_iterations steps. When raised from a matrix
/// extraction, row()/col() identify the offending cell (0-based).
class NonConvergenceError : public Error {
public:
  explicit NonConvergenceError(const std::string& what) : Error(what) {}
  NonConvergenceError(const std::string& what, std::size_t row, std::size_t col)
      : Error(what), row_(row), col_(col) {}

  std::optional<std::size_t> row() const { return row_; }
  std::optional<std::size_t> col() const { return col_; }

private:
  std::optional<std::size_t> row_;
  std::optional<std::size_t> col_;
};

/// A declared class label has no training rows.
class EmptyClassError : public Error {
public:
  using Error::Error;
};

/// Metrics requested over a test set with zero rows.
class EmptyTestSetError : public Error {
public:
  using Error::Error;
};

/// A class has fewer rows than the split demands (or the dataset has
/// fewer than two classes).
class InsufficientClassCountError : public Error {
public:
  using Error::Error;
};

/// Malformed text input (CSV cell, model file line). Coordinates are
/// 1-based; row counts physical file lines, the header being line 1.
class ParseError : public Error {
public:
  explicit ParseError(const std::string& what) : Error(what) {}
  ParseError(const std::string& what, std::size_t row) : Error(what), row_(row) {}
  ParseError(const std::string& what, std::size_t row, std::size_t col)
      : Error(what), row_(row), col_(col) {}

  std::optional<std::size_t> row() const { return row_; }
  std::optional<std::size_t> col() const { return col_; }

private:
  std::optional<std::size_t> row_;
  std::optional<std::size_t> col_;
};

/// The requested label column does not exist in the file.
class MissingLabelColumnError : public Error {
public:
  using Error::Error;
};

/// Filesystem-level failure; the message always contains the path.
class IoError : public Error {
public:
  using Error::Error;
};

} // namespace chaosnet
