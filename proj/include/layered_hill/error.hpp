#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace layered_hill {

enum class ErrorCode {
  NonPositiveCellSize,
  DimensionMismatch,
  UnsupportedDimension,
  NonFiniteCoordinate,
  ArityMismatch,
  InvalidConstraint,
  ArityExceedsCloud,
  TooManySubsets,
  IndeterminateCount,
  InsufficientExtremes,
  NonPositiveH,
  UnsupportedConstraint,
  ParameterOutOfRange,
  UnsupportedRegime,
  MissingXi,
  DegenerateInterval,
  ProbabilityOutOfRange,
  RemoveCountExceedsCloud,
  EmptySample,
  ConfigInvalid,
  ParseError,
  IoFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure surfaced by the library carries one of the codes above so
// callers (the CLI in particular) can map them to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace layered_hill
