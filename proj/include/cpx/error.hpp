#pragma once

#include <stdexcept>
#include <string>

namespace cpx {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a structural precondition (rank, sizes, empty inputs).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// No usable pivot for eliminating an equality constraint.
class PivotError : public Error {
 public:
  using Error::Error;
};

/// Node set does not determine a unique interpolant.
class UnisolvenceError : public Error {
 public:
  using Error::Error;
};

/// Plain evaluation overflowed; use the log-modulus evaluator instead.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cpx
