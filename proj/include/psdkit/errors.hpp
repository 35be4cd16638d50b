#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace psdkit {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Input violates an operation's precondition (non-square, non-Hermitian, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

// Shapes do not conform.
class DimensionError : public DomainError {
public:
  using DomainError::DomainError;
};

// Request exceeds a documented capacity guard (e.g. minor enumeration).
class CapacityError : public Error {
public:
  using Error::Error;
};

// A matrix required to be positive semidefinite is not.
// `index` is the 1-based leading index where the failure was detected.
class NotPsdError : public Error {
public:
  NotPsdError(const std::string& what, std::size_t index, double value)
      : Error(what), index_(index), value_(value) {}

  std::size_t index() const noexcept { return index_; }
  double value() const noexcept { return value_; }

private:
  std::size_t index_;
  double value_;
};

// A numerical procedure produced an inconsistent result.
class NumericalError : public Error {
public:
  using Error::Error;
};

}  // namespace psdkit
