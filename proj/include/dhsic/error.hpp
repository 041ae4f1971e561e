#pragma once

#include <stdexcept>
#include <string>

namespace dhsic {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed data: shape mismatches, non-finite values, bad files.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Inconsistent options, e.g. trapezoid quadrature without a grid.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// The variance estimate vanishes, so no z-score can be formed.
class DegenerateVariance : public Error {
 public:
  using Error::Error;
};

/// A weight scheme whose squared-mean limit is not above one.
class DegenerateScheme : public Error {
 public:
  using Error::Error;
};

/// An operation called outside the regime where it means anything.
class MisuseError : public Error {
 public:
  using Error::Error;
};

}  // namespace dhsic
