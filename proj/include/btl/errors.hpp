#pragma once

#include <stdexcept>

namespace btl {

// Error taxonomy shared by the whole library. Everything derives from Error
// so the API boundary can catch a single base type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ArgumentError : Error {
  using Error::Error;
};

struct ShapeError : Error {
  using Error::Error;
};

struct IndexError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace btl
