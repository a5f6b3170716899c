#ifndef FME_ERROR_H_
#define FME_ERROR_H_

#include <stdexcept>
#include <string>

namespace fme {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: unknown feature, malformed file, schema mismatch, bad option.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// File-system failures (missing file, unwritable path).
class IoError : public Error {
 public:
  using Error::Error;
};

// Input was well-formed but the requested quantity cannot be computed
// (empty retained set, infeasible partition objective, zero dispersion).
class ComputationError : public Error {
 public:
  using Error::Error;
};

}  // namespace fme

#endif  // FME_ERROR_H_
