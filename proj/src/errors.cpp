#include "hichom/errors.hpp"

namespace hichom {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::InvalidGeometry: return "InvalidGeometry";
    case ErrorCode::MeshTooCoarse: return "MeshTooCoarse";
    case ErrorCode::NonUnitCell: return "NonUnitCell";
    case ErrorCode::NonSpdCoefficient: return "NonSpdCoefficient";
    case ErrorCode::NonEllipticTensor: return "NonEllipticTensor";
    case ErrorCode::InconsistentConstraints: return "InconsistentConstraints";
    case ErrorCode::MissingChi: return "MissingChi";
    case ErrorCode::MissingCorrectors: return "MissingCorrectors";
    case ErrorCode::EmptyInclusion: return "EmptyInclusion";
    case ErrorCode::MeshMismatch: return "MeshMismatch";
    case ErrorCode::LadderMismatch: return "LadderMismatch";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::SolverDiverged: return "SolverDiverged";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::DegenerateRHom: return "DegenerateRHom";
    case ErrorCode::BoundsViolation: return "BoundsViolation";
  }
  return "UnknownError";
}

int error_exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::SolverDiverged:
    case ErrorCode::SingularSystem:
    case ErrorCode::IllConditioned:
    case ErrorCode::DegenerateRHom:
    case ErrorCode::BoundsViolation:
      return 2;
    default:
      return 1;
  }
}

}  // namespace hichom
