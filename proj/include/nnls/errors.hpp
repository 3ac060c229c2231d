#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nnls {

/// Failure categories raised by the toolkit. Every throwing operation uses
/// exactly one of these so callers (and the CLI exit-code mapping) can
/// dispatch on the kind rather than on message text.
enum class ErrorKind {
  InvalidArgument,
  ConfigError,
  PoleError,
  OnCutError,
  ZeroArgument,
  NoConvergence,
  ContinuationInvalid,
  ZeroDenominator,
  BoundaryZero,
  MultiplicityError,
  NearDegenerateDerivative,
  OnThresholdError,
  PoleHit,
  PartitionIndex,
  VanishingJump,
  AssumptionViolation,
  QuadratureFailure,
  SingularSystem,
  OverflowRegime,
  ZeroReflection,
  InconsistentData,
  BoundaryLeak,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nnls
