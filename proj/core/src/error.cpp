#include "mrfanom/error.hpp"

namespace mrfanom {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DuplicateLocation: return "DuplicateLocation";
    case ErrorCode::NonLatticeCoordinate: return "NonLatticeCoordinate";
    case ErrorCode::InvalidLocation: return "InvalidLocation";
    case ErrorCode::IncompleteGrid: return "IncompleteGrid";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::IncompleteSeries: return "IncompleteSeries";
    case ErrorCode::ConflictingBlocks: return "ConflictingBlocks";
    case ErrorCode::InsufficientYears: return "InsufficientYears";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::InvalidScheme: return "InvalidScheme";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::DegenerateEmission: return "DegenerateEmission";
    case ErrorCode::DegenerateClimatology: return "DegenerateClimatology";
    case ErrorCode::NumericalError: return "NumericalError";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) noexcept {
  return code == ErrorCode::DegenerateEmission || code == ErrorCode::DegenerateClimatology ||
         code == ErrorCode::NumericalError;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace mrfanom
