#pragma once

#include <stdexcept>
#include <string>

namespace spincorr {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Incompatible matrix shapes, non-square or asymmetric input.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation (d < 2, p > 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// A density matrix that violates one of the QuantumState invariants.
// The message names the violated invariant.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

// Requested dimensions exceed the supported desk-scale limits.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace spincorr
