#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bipath {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Precondition violated by the caller (bad index, bad interval label, ...).
struct DomainError : Error {
  using Error::Error;
};

// Matrix dimensions incompatible for the requested operation.
struct ShapeError : DomainError {
  using DomainError::DomainError;
};

// A structural invariant of an input object fails (non-commuting square,
// wrong matrix shape in a module, ...).
struct ValidationError : Error {
  using Error::Error;
};

// The library disagrees with itself. Always a bug, never bad input.
struct ConsistencyError : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

}  // namespace bipath
