#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mrfanom {

enum class ErrorCode {
  DuplicateLocation,
  NonLatticeCoordinate,
  InvalidLocation,
  IncompleteGrid,
  ParseError,
  InvalidValue,
  IncompleteSeries,
  ConflictingBlocks,
  InsufficientYears,
  NotApplicable,
  InvalidParameter,
  InvalidScheme,
  InvalidConfig,
  DegenerateEmission,
  DegenerateClimatology,
  NumericalError,
  InsufficientSamples,
  TooLarge,
  ShapeError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Numerical failures are reported differently from usage/config failures
// by the command-line tool (exit code 1 vs 2).
bool is_numerical(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mrfanom
