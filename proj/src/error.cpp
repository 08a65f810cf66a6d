#include "mdrlab/error.hpp"

namespace mdrlab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::MissingMeasurementContext: return "MissingMeasurementContext";
    case ErrorCode::ContextInvalid: return "ContextInvalid";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::IncompleteBasis: return "IncompleteBasis";
    case ErrorCode::IdentityViolation: return "IdentityViolation";
    case ErrorCode::NotQubit: return "NotQubit";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace mdrlab
