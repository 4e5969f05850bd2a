#pragma once

#include <stdexcept>
#include <string>

namespace nlgrad {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad kernel parameters,
/// mismatched truncations, wrong component counts, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The requested kernel/integrand pair is not integrable.
class NonIntegrable : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Successive quadrature refinements failed to agree within tolerance.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// Data violates a solvability condition (e.g. incompatible div-curl data).
class IncompatibleData : public Error {
 public:
  using Error::Error;
};

}  // namespace nlgrad
