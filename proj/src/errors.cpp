#include "nnls/errors.hpp"

namespace nnls {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::PoleError: return "PoleError";
    case ErrorKind::OnCutError: return "OnCutError";
    case ErrorKind::ZeroArgument: return "ZeroArgument";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::ContinuationInvalid: return "ContinuationInvalid";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::BoundaryZero: return "BoundaryZero";
    case ErrorKind::MultiplicityError: return "MultiplicityError";
    case ErrorKind::NearDegenerateDerivative: return "NearDegenerateDerivative";
    case ErrorKind::OnThresholdError: return "OnThresholdError";
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::PartitionIndex: return "PartitionIndex";
    case ErrorKind::VanishingJump: return "VanishingJump";
    case ErrorKind::AssumptionViolation: return "AssumptionViolation";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::OverflowRegime: return "OverflowRegime";
    case ErrorKind::ZeroReflection: return "ZeroReflection";
    case ErrorKind::InconsistentData: return "InconsistentData";
    case ErrorKind::BoundaryLeak: return "BoundaryLeak";
  }
  return "Unknown";
}

}  // namespace nnls
