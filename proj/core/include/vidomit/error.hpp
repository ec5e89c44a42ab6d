#pragma once

#include <stdexcept>
#include <string>

namespace vidomit {

/// Base class for every error the toolkit raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter values outside their contract (zero sizes, ratios out of range,
/// replacement windows longer than the source).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Mismatched raster or grid dimensions, or regions outside their host frame.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Filesystem, decode or encode failures.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Token budget leaves no room for even one visual token per frame.
class BudgetInfeasible : public Error {
 public:
  using Error::Error;
};

/// Inputs contradict each other, e.g. zero reference energy paired with
/// nonzero compressed energy.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

/// Malformed data files: manifests, masks, response logs.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace vidomit
