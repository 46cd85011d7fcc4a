#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace semmap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A belief or observation collapsed to (numerically) zero mass.
class DegenerateDistributionError : public Error {
 public:
  using Error::Error;
};

/// Point or frame id not present in the map.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Fewer anchor pairs than registration needs.
class InsufficientAnchorsError : public Error {
 public:
  using Error::Error;
};

/// Anchor geometry does not determine a similarity transform.
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

/// Every map-side anchor sits on the centroid, so no scale can be estimated.
class ZeroScaleError : public DegenerateGeometryError {
 public:
  using DegenerateGeometryError::DegenerateGeometryError;
};

/// Violated precondition on an argument value.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. Carries the 1-based line number (0 when not line oriented).
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Input parsed but is inconsistent (dangling references, ordering, ranges).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Map document written by an unknown format version.
class FormatVersionError : public Error {
 public:
  using Error::Error;
};

/// Wraps an error raised inside a named pipeline stage.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what);

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace semmap
