#pragma once

#include <stdexcept>
#include <string>

namespace bloch {

/// Invalid argument or parameter outside the domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input polynomial is not normalized (p(0) = 0, p'(0) = 1).
class NormalizationError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed polynomial, map, or report input.
class ParseError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The mathematics degenerates: vanishing derivative at an expansion center,
/// singular Jacobian, or no usable center in a search.
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateCenterError : public DegeneracyError {
 public:
  using DegeneracyError::DegeneracyError;
};

class SearchFailureError : public DegeneracyError {
 public:
  using DegeneracyError::DegeneracyError;
};

/// Fixed-point iteration did not behave as the certificate promised.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergenceError : public SolverError {
 public:
  using SolverError::SolverError;
};

class DomainEscapeError : public SolverError {
 public:
  using SolverError::SolverError;
};

}  // namespace bloch
