#pragma once

#include <stdexcept>
#include <string>

namespace slsdesign {

// Base of every error thrown by the library. The CLI maps these to exit
// status 1; argument errors map to 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Moments describe a distribution with t >= 1 (mu3^2 too large).
class DegenerateDistributionError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Enumeration would exceed the supported design-space size.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Masses are negative or do not sum to one.
class InvalidMeasureError : public Error {
 public:
  using Error::Error;
};

// H(p) is singular where a nonsingular matrix is required.
class SingularityError : public Error {
 public:
  using Error::Error;
};

class SingularStartError : public SingularityError {
 public:
  using SingularityError::SingularityError;
};

// No implemented Hadamard construction covers the requested order.
class UnsupportedOrderError : public Error {
 public:
  using Error::Error;
};

// A combinatorial construction failed its certification gate or search.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

}  // namespace slsdesign
