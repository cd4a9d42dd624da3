#include "qnpe/errors.hpp"

namespace qnpe {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParameterConflict: return "ParameterConflict";
    case ErrorKind::StepSeedTooSmall: return "StepSeedTooSmall";
    case ErrorKind::SpectrumViolation: return "SpectrumViolation";
    case ErrorKind::DegenerateCurvature: return "DegenerateCurvature";
    case ErrorKind::InvalidSpectrum: return "InvalidSpectrum";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::IterationCapExceeded: return "IterationCapExceeded";
    case ErrorKind::EigFailure: return "EigFailure";
    case ErrorKind::ZeroDisplacement: return "ZeroDisplacement";
    case ErrorKind::StateMismatch: return "StateMismatch";
    case ErrorKind::BacktrackCapExceeded: return "BacktrackCapExceeded";
    case ErrorKind::NonFiniteIterate: return "NonFiniteIterate";
    case ErrorKind::MissingGroundTruth: return "MissingGroundTruth";
    case ErrorKind::LineSearchFailure: return "LineSearchFailure";
    case ErrorKind::ProblemMismatch: return "ProblemMismatch";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace qnpe
