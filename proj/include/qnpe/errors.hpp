#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qnpe {

// Error categories are part of the CLI contract: the bench tool prints the
// category name verbatim so scripts can match on it.
enum class ErrorKind {
  InvalidArgument,
  ParameterConflict,
  StepSeedTooSmall,
  SpectrumViolation,
  DegenerateCurvature,
  InvalidSpectrum,
  ParseError,
  NotSymmetric,
  NotPositiveDefinite,
  IterationCapExceeded,
  EigFailure,
  ZeroDisplacement,
  StateMismatch,
  BacktrackCapExceeded,
  NonFiniteIterate,
  MissingGroundTruth,
  LineSearchFailure,
  ProblemMismatch,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace qnpe
