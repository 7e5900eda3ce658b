#pragma once

#include <stdexcept>
#include <string>

namespace otsense {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The data violates an invariant (shape mismatch, NaN, constant column, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// An input column has a single distinct value and cannot be partitioned.
/// Bootstrap replicates catch this one specifically and redraw.
class DegenerateInputError : public DataError {
 public:
  using DataError::DataError;
};

/// A numerical routine could not produce a usable result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace otsense
