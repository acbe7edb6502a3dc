#include "ouq/errors.hpp"

namespace ouq {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ZeroMassMeasure: return "ZeroMassMeasure";
    case ErrorCode::DegenerateRange: return "DegenerateRange";
    case ErrorCode::EmptyFactorList: return "EmptyFactorList";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NonNormalizedFactor: return "NonNormalizedFactor";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InfeasibleConstrain: return "InfeasibleConstrain";
    case ErrorCode::InnerLoopFailed: return "InnerLoopFailed";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::UnknownResponse: return "UnknownResponse";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

void raise(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(to_string(code)) + ": " + message);
}

}  // namespace ouq
