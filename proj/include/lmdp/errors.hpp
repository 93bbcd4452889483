#pragma once

#include <stdexcept>
#include <string>

namespace lmdp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad dimensions, non-stochastic rows, reward bound violations.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class StochasticityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class WeightError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class RewardBoundError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A configured size limit (history nodes, enumerated policies) was hit.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class EnumerationCapExceeded : public CapExceeded {
 public:
  using CapExceeded::CapExceeded;
};

class ZeroProbabilityEvent : public Error {
 public:
  using Error::Error;
};

class PolicyDomainError : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lmdp
