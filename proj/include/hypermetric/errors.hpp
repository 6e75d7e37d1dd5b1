#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hypermetric {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed argument: dimension mismatch, nonpositive radius, non-finite input.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A point that must lie in a domain (or the unit disk) does not.
class DomainError : public Error {
 public:
  using Error::Error;
};

class UnsupportedDomainError : public Error {
 public:
  using Error::Error;
};

/// The inclusion U in X is not relatively compact (gap below the floor).
class InclusionError : public Error {
 public:
  using Error::Error;
};

class SamplingExhaustedError : public Error {
 public:
  using Error::Error;
};

/// Map text that does not belong to the grammar; carries the byte offset.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Division by (numerically) zero while evaluating a map.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A quadrature node of a path left the domain.
class PathInvalidError : public Error {
 public:
  using Error::Error;
};

/// No in-domain polyline joining two points could be found.
class ConnectivityError : public Error {
 public:
  using Error::Error;
};

/// A solver precondition failed (e.g. range evidence refuted).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hypermetric
