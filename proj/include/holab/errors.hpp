#pragma once

#include <stdexcept>
#include <string>

namespace holab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition. The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not reach its target accuracy. CLI exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ArclengthViolation : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ZeroM : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SignChange : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class BasisMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class RankMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InsufficientGrid : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class TargetNotInNeighborhood : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class AlgebraMembership : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ToleranceNotMet : public NumericalError {
 public:
  ToleranceNotMet(const std::string& what, double achieved)
      : NumericalError(what), achieved_(achieved) {}
  double achieved_error() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class QuadratureFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class Inconclusive : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace holab
