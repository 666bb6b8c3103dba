#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pairdisc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (length mismatch, non-finite values, bad codes).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Input file could not be parsed. Carries the 1-based line number when known.
class ParseError : public InvalidInput {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : InvalidInput(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Data is well-formed but carries no usable variation.
class DegenerateData : public Error {
 public:
  using Error::Error;
};

class ConstantVariable : public DegenerateData {
 public:
  using DegenerateData::DegenerateData;
};

class DegenerateRegressor : public DegenerateData {
 public:
  using DegenerateData::DegenerateData;
};

class DegenerateTable : public DegenerateData {
 public:
  using DegenerateData::DegenerateData;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pairdisc
