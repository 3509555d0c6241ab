#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sotune {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dimension mismatch, out-of-bounds point, or other violated precondition on inputs.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The objective returned a non-finite value.
class RejectedEvaluation : public Error {
 public:
  using Error::Error;
};

class EmptyArchiveError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration value (hyperparameter range, kernel setting, unknown name, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Cholesky factorization failed even after jitter escalation.
class IllConditionedKernel : public Error {
 public:
  using Error::Error;
};

// Calls made out of order, e.g. feedback without a preceding proposal.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Operation on a policy that was never initialized with its arms.
class StateError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class EmptyCandidateSet : public Error {
 public:
  using Error::Error;
};

// An optimization run failed; carries the iteration (0 = initial design).
class RunError : public Error {
 public:
  RunError(std::size_t iteration, const std::string& message)
      : Error("iteration " + std::to_string(iteration) + ": " + message), iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

// Config-file syntax or semantic error, tagged with the offending line (0 when not line-specific).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace sotune
