#pragma once

#include <stdexcept>
#include <string>

namespace shrinkage {

// Argument outside the mathematical domain of an operation (negative w,
// p < 3 where an integral is not defined, alpha < 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical procedure did not reach its tolerance within budget.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TruncationError : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

class QuadratureError : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

// The risk-difference identity needs phi(w) -> p-2 at infinity; families
// without that limit are refused.
class UnsupportedFamily : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace shrinkage
