#pragma once

#include <stdexcept>
#include <string>

namespace botl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller-side mistakes: malformed inputs, bad presets, bad configuration.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class InvalidPreset : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class InvalidConfiguration : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Failures that come from the geometry or the numerics rather than from
/// the caller. The CLI maps these to exit code 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Two points that must differ coincide (e.g. receiver on top of a target).
class DegenerateGeometry : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The data cannot pin down a 2-D position (colinear receivers and target,
/// parallel lines of bearing).
class NonIdentifiable : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Total least squares has no unique solution.
class DegenerateTls : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// An observability requirement failed before simulation.
class PreconditionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace botl
