#pragma once

#include <stdexcept>
#include <string>

namespace choquard {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A fractional power of a negative sample was requested.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Zero or otherwise degenerate profile where a ratio is undefined.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// The requested optimum does not exist in this parameter regime.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// (N, alpha, p) lies outside the existence range; there is no nontrivial solution.
class NonexistenceError : public Error {
 public:
  using Error::Error;
};

/// The solve-and-rescale iteration increased S even at the smallest damping.
class StagnationError : public Error {
 public:
  using Error::Error;
};

/// The decay window does not sit in a converged asymptotic tail.
class UnreliableTail : public Error {
 public:
  using Error::Error;
};

/// A point of a discrete field has no mirror image under the reflection.
class PairingError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries the offending line (1-based, 0 if unknown).
class InputError : public Error {
 public:
  InputError(const std::string& what, std::size_t line)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Memory or another system resource ran out.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace choquard
