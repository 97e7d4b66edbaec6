#include "harmonics/error.hpp"

namespace harmonics {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Asymmetric: return "asymmetric";
    case ErrorKind::NegativeWeight: return "negative-weight";
    case ErrorKind::NonZeroDiagonal: return "nonzero-diagonal";
    case ErrorKind::Disconnected: return "disconnected";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::NonFinite: return "non-finite";
    case ErrorKind::NotOnManifold: return "not-on-manifold";
    case ErrorKind::NotTangent: return "not-tangent";
    case ErrorKind::EigenSolverFailure: return "eigensolver-failure";
    case ErrorKind::SvdFailure: return "svd-failure";
    case ErrorKind::StepFailure: return "step-failure";
    case ErrorKind::EmptyInput: return "empty-input";
    case ErrorKind::InsufficientSamples: return "insufficient-samples";
    case ErrorKind::ZeroVariance: return "zero-variance";
    case ErrorKind::MissingGroup: return "missing-group";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace harmonics
