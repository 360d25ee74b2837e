#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace strata {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad ids, invalid graph, weights that do not sum to one.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A referenced vertex, edge or point does not exist in the graph.
class InvalidPointError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Two or more shortest link paths of equal length below pi connect the
/// endpoints, so the geodesic is not unique.
class AmbiguousGeodesicError : public Error {
 public:
  using Error::Error;
};

/// A log map was requested for points without a unique shortest path.
/// `atoms` lists offending measure atoms when the failure came from a measure.
class CutLocusError : public Error {
 public:
  explicit CutLocusError(std::string what, std::vector<std::size_t> atoms = {})
      : Error(std::move(what)), atoms_(std::move(atoms)) {}
  const std::vector<std::size_t>& atoms() const { return atoms_; }

 private:
  std::vector<std::size_t> atoms_;
};

class StepTooLargeError : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class EmptyConeError : public Error {
 public:
  using Error::Error;
};

class NotRetractableError : public CutLocusError {
 public:
  using CutLocusError::CutLocusError;
};

/// Raised when devissage runs past the codimension bound; never expected on
/// valid inputs.
class IterationBoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace strata
