#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace semihoch {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonAssociative : public Error {
 public:
  NonAssociative(std::size_t i, std::size_t j, std::size_t k)
      : Error("table is not associative at (" + std::to_string(i) + ", " +
              std::to_string(j) + ", " + std::to_string(k) + ")"),
        i(i),
        j(j),
        k(k) {}
  std::size_t i, j, k;
};

class BoundExceeded : public Error {
 public:
  using Error::Error;
};

// Raised when a chain space would exceed the configured number of basis
// tensors.
class ResourceBound : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NotAGroup : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotRectangular : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class HypothesisFailure : public Error {
 public:
  using Error::Error;
};

class FibreSolveFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace semihoch
