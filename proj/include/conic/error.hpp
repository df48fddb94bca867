#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace conic {

/// Base of every error raised by the library. Each subclass carries the
/// process exit status the command-line tool reports for it.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual std::string_view kind() const noexcept { return "error"; }
  virtual int exit_code() const noexcept { return 1; }
};

/// Parameters outside an operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "domain"; }
  int exit_code() const noexcept override { return 2; }
};

/// Limit requested exactly on a phase-transition boundary, where no value is known.
class AtThreshold : public DomainError {
 public:
  using DomainError::DomainError;
  std::string_view kind() const noexcept override { return "at-threshold"; }
};

class SolverError : public Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "solver"; }
  int exit_code() const noexcept override { return 3; }
};

/// Input too close to non-general position to classify reliably.
class DegenerateInput : public SolverError {
 public:
  using SolverError::SolverError;
  std::string_view kind() const noexcept override { return "degenerate-input"; }
};

/// An identity that must hold exactly did not.
class InvariantViolation : public Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "invariant-violation"; }
  int exit_code() const noexcept override { return 3; }
};

class SamplingError : public Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "sampling"; }
  int exit_code() const noexcept override { return 4; }
};

class AcceptanceTooSmall : public SamplingError {
 public:
  using SamplingError::SamplingError;
  std::string_view kind() const noexcept override { return "acceptance-too-small"; }
};

}  // namespace conic
