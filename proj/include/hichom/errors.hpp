#pragma once

#include <stdexcept>
#include <string>

namespace hichom {

enum class ErrorCode {
  // configuration / precondition failures (exit code 1)
  ParseError,
  ValidationError,
  InvalidGeometry,
  MeshTooCoarse,
  NonUnitCell,
  NonSpdCoefficient,
  NonEllipticTensor,
  InconsistentConstraints,
  MissingChi,
  MissingCorrectors,
  EmptyInclusion,
  MeshMismatch,
  LadderMismatch,
  ResolutionTooCoarse,
  // numerical failures (exit code 2)
  SolverDiverged,
  SingularSystem,
  IllConditioned,
  DegenerateRHom,
  BoundsViolation,
};

const char* error_code_name(ErrorCode code);

// 1 = validation error, 2 = solver failure (matches the CLI exit codes).
int error_exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const { return code_; }
  const std::string& message() const { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace hichom
