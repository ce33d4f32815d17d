#pragma once

#include <stdexcept>
#include <string>

namespace pooling {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Floating-point breakdown (underflowed normalizer, degenerate integral).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A monotone root search could not bracket its target.
class BracketError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A property that must hold by construction was observed to fail.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace pooling
