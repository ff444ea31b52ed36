#pragma once

#include <stdexcept>
#include <string>

namespace anematic {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (negative density, NaN entries).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent configuration; the CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Field shapes or grids do not match.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A bracketed search left its bracket or a table was queried outside its range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Time step violates an explicit stability bound.
class StepSizeError : public Error {
 public:
  using Error::Error;
};

class IllConditionedError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver or fixed-point loop exhausted its iteration budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace anematic
