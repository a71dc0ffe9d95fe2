#include "hichom/coefficients.hpp"

#include "hichom/errors.hpp"

namespace hichom {

void PhaseCoefficients::validate() const {
  for (const auto& [phase, m] : a)
    if (!is_spd_2x2(m)) throw Error(ErrorCode::NonSpdCoefficient, "dielectric coefficient a must be SPD");
  for (const auto& [phase, p] : B)
    if (!(p.mu > 0.0) || p.lambda < 0.0)
      throw Error(ErrorCode::NonEllipticTensor, "B requires mu > 0 and lambda >= 0 per phase");
  // R.mu == 0 is admitted as the degenerate no-contrast case; the W cell
  // problems reject it separately.
  if (R.mu < 0.0 || R.lambda < 0.0)
    throw Error(ErrorCode::NonEllipticTensor, "R requires mu >= 0 and lambda >= 0");
  // C is symmetric by its (alpha, beta) representation; no sign constraint.
  if (!(gamma > 0.0)) throw Error(ErrorCode::ValidationError, "gamma must be positive");
}

std::map<Phase, Rank4> PhaseCoefficients::b_tensors() const {
  std::map<Phase, Rank4> t;
  for (const auto& [phase, p] : B) t[phase] = p.tensor();
  return t;
}

std::map<Phase, Rank4> PhaseCoefficients::c_tensors() const {
  std::map<Phase, Rank4> t;
  for (const auto& [phase, p] : C) t[phase] = p.tensor();
  return t;
}

std::map<Phase, Rank4> PhaseCoefficients::r_tensor_inclusion() const {
  return {{Phase::Inclusion, R.tensor()}};
}

std::map<Phase, Rank4> PhaseCoefficients::r_tensor_everywhere() const {
  return {{Phase::Matrix, R.tensor()}, {Phase::Inclusion, R.tensor()}};
}

PhaseCoefficients PhaseCoefficients::constant(const Mat2& a, const IsotropicPair& b, const IsotropicPair& r,
                                              const IsotropicPair& c, double gamma) {
  PhaseCoefficients pc;
  pc.a = {{Phase::Matrix, a}, {Phase::Inclusion, a}};
  pc.B = {{Phase::Matrix, b}, {Phase::Inclusion, b}};
  pc.R = r;
  pc.C = {{Phase::Matrix, c}, {Phase::Inclusion, c}};
  pc.gamma = gamma;
  return pc;
}

}  // namespace hichom
