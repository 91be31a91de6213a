#pragma once

#include <stdexcept>
#include <string>

namespace tavdc {

// Base of every error raised by the library. kind() is a short stable tag
// used by the CLI for machine-parsable failure lines.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept = 0;
};

// Invalid or incomplete configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "config"; }
};

// A mutation would break a state invariant (over-reserve, double release...).
// The state is left untouched when this is thrown.
class StateError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "state"; }
};

// Malformed external input: trace files, solution files, candidates.
class InputError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "input"; }
};

// An exhaustive search was refused because the instance is too large.
class SizeLimitError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "size"; }
};

}  // namespace tavdc
