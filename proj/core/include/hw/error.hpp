#pragma once

#include <stdexcept>
#include <string>

namespace hw {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unsupported configuration (bad θ description, unknown rule).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A certified decision could not be made at the maximum allowed precision.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// Work or memory budget exhausted.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// A mean-square integral was requested beyond the enumerated spectrum.
class NeedsMoreSpectrum : public Error {
 public:
  using Error::Error;
};

/// Irrational-only pipeline invoked with a rational parameter.
class ModeError : public Error {
 public:
  using Error::Error;
};

}  // namespace hw
