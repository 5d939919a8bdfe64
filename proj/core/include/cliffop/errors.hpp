#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cliffop {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in algebras of different dimension.
class SignatureMismatch : public Error {
 public:
  SignatureMismatch(int lhs, int rhs);
};

/// Argument has the wrong shape (non-vector where a vector is required,
/// non-homogeneous k-vector, out-of-range index, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }
  /// Message without the offset suffix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t offset_;
  std::string detail_;
};

/// Evaluation left the domain of an expression (log of a non-positive
/// real, division by zero, ...).
class DomainError : public Error {
 public:
  DomainError(std::string message, std::string subexpression);
  const std::string& subexpression() const noexcept { return subexpression_; }
  /// Message without the subexpression suffix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string subexpression_;
  std::string detail_;
};

/// A sample point of a grid hits a singular set that was not masked.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Scalar Riccati ODE left the blow-up bound.
class BlowUpError : public Error {
 public:
  BlowUpError(int axis, double location, double value);
  int axis() const noexcept { return axis_; }
  double location() const noexcept { return location_; }

 private:
  int axis_;
  double location_;
};

/// Pseudoscalar mode does not fit the dimension or the field.
class ModeError : public Error {
 public:
  using Error::Error;
};

}  // namespace cliffop
