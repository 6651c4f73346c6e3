#pragma once

#include <stdexcept>
#include <string>

namespace spartun {

// Base class for everything thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  using Error::Error;
};
struct SchemaError : Error {
  using Error::Error;
};
struct ValidationError : Error {
  using Error::Error;
};
struct DegenerateError : Error {
  using Error::Error;
};
struct RangeError : Error {
  using Error::Error;
};
struct UnknownIdError : Error {
  using Error::Error;
};
struct EmptyResultError : Error {
  using Error::Error;
};
struct NoEligiblePivotError : Error {
  using Error::Error;
};
struct DegenerateGeometryError : Error {
  using Error::Error;
};
struct ShapeError : Error {
  using Error::Error;
};
struct IndexError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};
struct GraphMismatchError : Error {
  using Error::Error;
};
struct InsufficientScenesError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct NonFiniteGradientError : Error {
  using Error::Error;
};

// Completion-client failure classes, distinguishable by the caller.
struct AuthError : Error {
  using Error::Error;
};
struct RateLimitExhaustedError : Error {
  using Error::Error;
};
struct TransportError : Error {
  using Error::Error;
};
struct MalformedResponseError : Error {
  using Error::Error;
};

}  // namespace spartun
