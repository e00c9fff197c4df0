#pragma once

#include <stdexcept>
#include <string>

namespace lamg {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a graph with zero nodes is assembled.
struct EmptyGraphError : Error {
  using Error::Error;
};

// Raised when a Gauss-Seidel or Schur step hits a zero pivot.
struct SingularDiagonalError : Error {
  using Error::Error;
};

// Raised when a matrix fails the Laplacian structure checks.
struct InvalidLaplacianError : Error {
  using Error::Error;
};

struct DimensionMismatchError : Error {
  using Error::Error;
};

// Raised when a right-hand side has a nonzero sum.
struct IncompatibleRhsError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

} // namespace lamg
