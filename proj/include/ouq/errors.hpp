#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ouq {

enum class ErrorCode {
  ZeroMassMeasure,
  DegenerateRange,
  EmptyFactorList,
  LengthMismatch,
  NonNormalizedFactor,
  DimensionMismatch,
  InfeasibleConstrain,
  InnerLoopFailed,
  DomainError,
  UnknownResponse,
  ArityMismatch,
  ParseError,
  ValidationError,
  IoError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported through this type; code() is what the
// C API maps onto its status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

}  // namespace ouq
