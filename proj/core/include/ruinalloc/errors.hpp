#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ruinalloc {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Model, query or configuration violates a documented precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed model configuration text. Carries the 1-based source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(msg), line_(line), column_(column) {}
  explicit ParseError(const std::string& msg) : Error(msg) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_ = 0;
  std::size_t column_ = 0;
};

// The adjustment (Cramer) equation kappa(theta) = 0 has no positive root,
// typically because the loss drift is not negative.
class NoCramerRoot : public Error {
 public:
  using Error::Error;
};

// The conditioning event has zero (or numerically zero) probability, or the
// requested quantity diverges.
class InfeasibleCondition : public Error {
 public:
  using Error::Error;
};

// The allocation is mathematically undefined for the requested inputs, e.g.
// the running supremum over an infinite horizon with nonnegative drift.
class UndefinedAllocation : public Error {
 public:
  using Error::Error;
};

// The input combination is outside the computable set of this library.
class NotSupported : public Error {
 public:
  using Error::Error;
};

// Monte Carlo: no path reached ruin, so conditional estimates are undefined.
class ZeroRuinedPaths : public Error {
 public:
  using Error::Error;
};

// Monte Carlo: no path fell inside the conditioning window.
class ZeroConditioningPaths : public Error {
 public:
  using Error::Error;
};

}  // namespace ruinalloc
