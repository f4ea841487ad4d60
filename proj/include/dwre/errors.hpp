#pragma once

#include <stdexcept>
#include <string>

namespace dwre {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad parameters, unknown config keys, points outside the window.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Configuration is not in general position (distance ties, aligned pairs, arrival ties).
class GenericityError : public Error {
 public:
  using Error::Error;
};

/// An enumeration or allocation guard was hit.
class ResourceCapError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace dwre
