#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sufset {

// Bad arguments: dimension mismatch, invalid probability vectors, bad sets.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite utilities, attributes or offsets.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid scenario/experiment configuration, or a correction used outside
// the mode it is allowed in.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every observation has a singleton set: the likelihood does not depend on beta.
class NoIdentification : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

// Some |beta_k| crossed the divergence bound (perfect prediction in the data).
class SeparationError : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

class RankDeficiency : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

}  // namespace sufset
