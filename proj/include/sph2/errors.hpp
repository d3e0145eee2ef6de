#pragma once

#include <stdexcept>
#include <string>

namespace sph2 {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: violated model assumptions, malformed files, bad flags.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown: singular systems, solver failures, overflow.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Raised when an operation requiring a Hurwitz state matrix gets one
/// with spectral abscissa at or above the stability margin.
class NotHurwitzError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace sph2
