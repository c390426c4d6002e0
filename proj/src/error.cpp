#include "layered_hill/error.hpp"

namespace layered_hill {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveCellSize: return "NonPositiveCellSize";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::NonFiniteCoordinate: return "NonFiniteCoordinate";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::InvalidConstraint: return "InvalidConstraint";
    case ErrorCode::ArityExceedsCloud: return "ArityExceedsCloud";
    case ErrorCode::TooManySubsets: return "TooManySubsets";
    case ErrorCode::IndeterminateCount: return "IndeterminateCount";
    case ErrorCode::InsufficientExtremes: return "InsufficientExtremes";
    case ErrorCode::NonPositiveH: return "NonPositiveH";
    case ErrorCode::UnsupportedConstraint: return "UnsupportedConstraint";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::UnsupportedRegime: return "UnsupportedRegime";
    case ErrorCode::MissingXi: return "MissingXi";
    case ErrorCode::DegenerateInterval: return "DegenerateInterval";
    case ErrorCode::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case ErrorCode::RemoveCountExceedsCloud: return "RemoveCountExceedsCloud";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

}  // namespace layered_hill
