#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mdrlab {

enum class ErrorCode {
  NotHermitian,
  NotUnitary,
  DimensionMismatch,
  Degenerate,
  NotNormalized,
  MissingMeasurementContext,
  ContextInvalid,
  OutOfDomain,
  IncompleteBasis,
  IdentityViolation,
  NotQubit,
  DimensionTooLarge,
  Singular,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` tells callers which
/// contract was broken.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mdrlab
