#pragma once

#include <stdexcept>
#include <string>

namespace infaff {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands belong to different Weil contexts.
class ContextMismatch : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Division or square root of an element whose constant term does not allow it.
class NotInvertible : public Error {
 public:
  using Error::Error;
};

/// A partial operation was applied outside its domain (membership, e-fixedness, ...).
class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace infaff
