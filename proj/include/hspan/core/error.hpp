#pragma once

#include <stdexcept>
#include <string>

namespace hspan {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a type invariant or an operation precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Filesystem or container I/O failure.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A computation is mathematically undefined for the given input
/// (constant target, zero-variance intensity, ...). No score is produced.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

namespace detail {

template <class E = ValidationError>
inline void require(bool condition, const std::string& message) {
  if (!condition) throw E(message);
}

}  // namespace detail
}  // namespace hspan
