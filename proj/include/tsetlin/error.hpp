#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tsetlin {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid hyperparameters or construction arguments.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Shape mismatch between a machine and the data handed to it.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// An internal invariant was broken (e.g. an unreachable feedback cell).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

class SnapshotError : public Error {
 public:
  using Error::Error;
};

}  // namespace tsetlin
