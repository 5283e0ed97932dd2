#pragma once

#include <stdexcept>
#include <string>

namespace fairagg {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument: unknown label, mismatched domains, violated invariant.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Logarithmic score requested for an outcome with probability zero.
class ZeroProbabilityError : public Error {
 public:
  using Error::Error;
};

/// A group has no ground-truth positives, so its false negative rate is
/// undefined.
class EmptyPositiveClassError : public Error {
 public:
  using Error::Error;
};

/// Fairness measure kind that this build does not implement.
class UnsupportedMeasureError : public Error {
 public:
  using Error::Error;
};

/// Reciprocal-style utility evaluated at zero.
class UtilityUndefinedError : public Error {
 public:
  using Error::Error;
};

/// Input file is structurally unusable (missing columns, empty, unreadable).
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// One or more data rows failed to parse and skipping was not requested.
class RowError : public Error {
 public:
  RowError(const std::string& what, std::size_t bad_rows)
      : Error(what), bad_rows_(bad_rows) {}
  std::size_t bad_rows() const { return bad_rows_; }

 private:
  std::size_t bad_rows_;
};

}  // namespace fairagg
