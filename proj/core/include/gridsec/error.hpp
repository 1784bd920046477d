#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gridsec {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arguments violate a documented precondition (bad index, k in the protected set, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// An equality row of the form 0 = nonzero; the LP it came from is infeasible.
class InconsistentRow : public Error {
 public:
  explicit InconsistentRow(std::size_t row)
      : Error("inconsistent constraint row " + std::to_string(row)), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// The requested problem instance has an empty feasible set.
class Infeasible : public Error {
 public:
  using Error::Error;
};

/// A combinatorial enumeration would exceed its configured budget.
class SizeLimitExceeded : public Error {
 public:
  using Error::Error;
};

/// The measurement matrix does not have full column rank.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class DisconnectedGraph : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnknownMeterId : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The exact l1 pipeline requires a flow-only measurement system.
class HasInjections : public Error {
 public:
  using Error::Error;
};

class TargetIsInjection : public Error {
 public:
  using Error::Error;
};

/// Proposition-style precondition (nonzero target row, full column rank) failed.
class ConditionViolated : public Error {
 public:
  using Error::Error;
};

/// Null space of A^T is {0}; the sparse reformulation does not exist.
class TrivialNullspace : public Error {
 public:
  using Error::Error;
};

class ZeroColumn : public Error {
 public:
  using Error::Error;
};

class MethodUnavailable : public Error {
 public:
  using Error::Error;
};

/// Two solution methods disagree on an instance where theory says they must agree.
class MethodMismatch : public Error {
 public:
  using Error::Error;
};

/// A result violated an internal guarantee (e.g. a fractional LP vertex on TU data).
class InternalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace gridsec
