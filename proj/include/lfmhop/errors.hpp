#pragma once

#include <stdexcept>
#include <string>

namespace lfmhop {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape disagreement between matrix arguments.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : Error(msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Matrix fails a full-rank requirement.
class RankError : public Error {
 public:
  using Error::Error;
};

/// Value outside the operation's domain (non-binary, non-integer, non-finite).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Bad or incomplete configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Request exceeds a hard size limit.
class LimitError : public Error {
 public:
  using Error::Error;
};

/// Random generation could not satisfy its constraints.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// Cached quantities drifted beyond tolerance from a scratch recomputation.
class NumericalDriftError : public Error {
 public:
  using Error::Error;
};

}  // namespace lfmhop
