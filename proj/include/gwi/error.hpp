#pragma once

#include <stdexcept>
#include <string>

namespace gwi {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument or parameter outside its documented range.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numeric safety limit was hit: truncation deficit above the ceiling,
/// population guard, cache horizon too short.
class NumericGuard : public Error {
 public:
  using Error::Error;
};

/// Malformed model specification or command input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace gwi
