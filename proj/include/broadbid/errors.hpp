#pragma once

#include <stdexcept>
#include <string>

namespace broadbid {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A winning set that is not closed under the dependency relation.
class InfeasibleSetError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class IterationLimitError : public SolverError {
 public:
  using SolverError::SolverError;
};

// A budgeted LP vertex with more than one distinct fractional value.
class StructureError : public SolverError {
 public:
  using SolverError::SolverError;
};

class OverflowError : public SolverError {
 public:
  using SolverError::SolverError;
};

// Exhaustive or branch-and-bound search refused because the instance is
// larger than the configured limit.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace broadbid
