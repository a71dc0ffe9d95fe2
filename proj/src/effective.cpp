#include "hichom/effective.hpp"

#include <cmath>

#include "hichom/errors.hpp"

namespace hichom {

namespace {

constexpr double kFormAgreementTol = 1e-8;

void require_fields(const std::array<FeField, 2>& fields, const char* what) {
  for (const auto& f : fields)
    if (!f.mesh) throw Error(ErrorCode::MissingCorrectors, std::string(what) + " correctors not solved");
}

void require_fields(const std::array<FeField, 3>& fields, const char* what) {
  for (const auto& f : fields)
    if (!f.mesh) throw Error(ErrorCode::MissingCorrectors, std::string(what) + " correctors not solved");
}

// Gradient of a scalar nodal field at a Gauss point of element e.
Vec2 gradient_at(const StructuredMesh& mesh, const FeField& f, int e, const GaussPoint& q) {
  Vec2 g = Vec2::Zero();
  for (int a = 0; a < 4; ++a) g += q.dshape.row(a).transpose() * f(mesh.elements[e][a], 0);
  return g;
}

// Symmetric-gradient Voigt strain of a vector nodal field at a Gauss point.
Eigen::Vector3d strain_at(const StructuredMesh& mesh, const FeField& f, int e, const GaussPoint& q) {
  Mat2 g = Mat2::Zero();
  for (int a = 0; a < 4; ++a)
    for (int c = 0; c < 2; ++c) g.row(c) += q.dshape.row(a) * f(mesh.elements[e][a], c);
  return {g(0, 0), g(1, 1), g(0, 1) + g(1, 0)};
}

// Matrix arithmetic/harmonic means of a two-phase coefficient, weighted by
// the discrete phase areas; quadratic-form bounds for any effective tensor of
// the discrete composite.
struct MatrixBounds {
  Eigen::MatrixXd harmonic, arithmetic;
  bool valid = false;
};

MatrixBounds matrix_bounds(const Eigen::MatrixXd& matrix_coeff, const Eigen::MatrixXd& inclusion_coeff,
                           double inclusion_fraction) {
  MatrixBounds b;
  if (inclusion_fraction <= 0.0 || inclusion_fraction >= 1.0) return b;
  const double tf = 1.0 - inclusion_fraction, ts = inclusion_fraction;
  b.arithmetic = tf * matrix_coeff + ts * inclusion_coeff;
  b.harmonic = (tf * matrix_coeff.inverse() + ts * inclusion_coeff.inverse()).inverse();
  b.valid = true;
  return b;
}

void check_form_bounds(const Eigen::MatrixXd& value, const MatrixBounds& bounds, const char* name) {
  if (!bounds.valid) return;
  const double scale = value.cwiseAbs().maxCoeff() + 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> lo(value - bounds.harmonic);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> hi(bounds.arithmetic - value);
  if (lo.eigenvalues().minCoeff() < -1e-9 * scale || hi.eigenvalues().minCoeff() < -1e-9 * scale)
    throw Error(ErrorCode::BoundsViolation,
                std::string(name) + " violates the Reuss-Voigt quadratic-form bounds");
}

}  // namespace

Mat2 assemble_a_hom(const StructuredMesh& mesh, const std::array<FeField, 2>& chi,
                    const PhaseCoefficients& coeffs, Mat2* averaging_out) {
  require_fields(chi, "chi");
  Mat2 energy = Mat2::Zero(), averaging = Mat2::Zero();
  for (int e = 0; e < mesh.element_count(); ++e) {
    auto it = coeffs.a.find(mesh.element_phase[e]);
    if (it == coeffs.a.end()) continue;
    const Mat2& a = it->second;
    for (const GaussPoint& q : element_quadrature(mesh, e)) {
      Vec2 g[2];
      for (int i = 0; i < 2; ++i) g[i] = Vec2::Unit(i) + gradient_at(mesh, chi[i], e, q);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          energy(i, j) += q.w * g[j].dot(a * g[i]);
          averaging(i, j) += q.w * Vec2::Unit(j).dot(a * g[i]);
        }
    }
  }
  if (averaging_out) *averaging_out = averaging;

  if ((energy - energy.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + energy.cwiseAbs().maxCoeff()))
    throw Error(ErrorCode::BoundsViolation, "a_hom is not symmetric");
  if (!is_spd_2x2(0.5 * (energy + energy.transpose())))
    throw Error(ErrorCode::BoundsViolation, "a_hom is not positive definite");
  if ((energy - averaging).cwiseAbs().maxCoeff() > kFormAgreementTol)
    throw Error(ErrorCode::BoundsViolation, "a_hom energy and averaging forms disagree");

  const auto am = coeffs.a.find(Phase::Matrix);
  const auto ai = coeffs.a.find(Phase::Inclusion);
  if (am != coeffs.a.end() && ai != coeffs.a.end())
    check_form_bounds(energy, matrix_bounds(am->second, ai->second, mesh.inclusion_fraction()), "a_hom");
  return energy;
}

namespace {

// Shared kernel for the corrector-energy rank-4 assemblies:
// out_{vi,vj} = int_domain coeff : (E^{vi} - D(F^{vi})) : (E^{vj} - D(F^{vj})),
// with the averaging variant pairing against the bare E^{vj}.
Rank4 corrector_energy_tensor(const StructuredMesh& mesh, const std::array<FeField, 3>& fields,
                              const PhaseTensor& coeff, Rank4* averaging_out) {
  Eigen::Matrix3d energy = Eigen::Matrix3d::Zero(), averaging = Eigen::Matrix3d::Zero();
  for (int e = 0; e < mesh.element_count(); ++e) {
    auto it = coeff.find(mesh.element_phase[e]);
    if (it == coeff.end()) continue;
    const Rank4& t = it->second;
    for (const GaussPoint& q : element_quadrature(mesh, e)) {
      Eigen::Vector3d corrected[3];
      for (int v = 0; v < 3; ++v) corrected[v] = canonical_strain(v) - strain_at(mesh, fields[v], e, q);
      for (int vi = 0; vi < 3; ++vi)
        for (int vj = 0; vj < 3; ++vj) {
          energy(vi, vj) += q.w * t.quadratic(corrected[vi], corrected[vj]);
          averaging(vi, vj) += q.w * t.quadratic(corrected[vi], canonical_strain(vj));
        }
    }
  }
  if (averaging_out) *averaging_out = Rank4(averaging);
  return Rank4(energy);
}

}  // namespace

Rank4 assemble_B_hom(const StructuredMesh& mesh, const std::array<FeField, 3>& V,
                     const PhaseCoefficients& coeffs, Rank4* averaging_out) {
  require_fields(V, "V");
  Rank4 averaging;
  const Rank4 energy = corrector_energy_tensor(mesh, V, coeffs.b_tensors(), &averaging);
  if (averaging_out) *averaging_out = averaging;

  const double scale = 1.0 + energy.max_abs();
  if (energy.major_symmetry_defect() > 1e-10 * scale)
    throw Error(ErrorCode::BoundsViolation, "B_hom lacks major symmetry");
  if (energy.min_eigenvalue() <= 0.0)
    throw Error(ErrorCode::BoundsViolation, "B_hom is not positive definite");
  if ((energy.voigt() - averaging.voigt()).cwiseAbs().maxCoeff() > kFormAgreementTol)
    throw Error(ErrorCode::BoundsViolation, "B_hom energy and averaging forms disagree");

  const auto bm = coeffs.B.find(Phase::Matrix);
  const auto bi = coeffs.B.find(Phase::Inclusion);
  if (bm != coeffs.B.end() && bi != coeffs.B.end())
    check_form_bounds(energy.voigt(),
                      matrix_bounds(bm->second.tensor().voigt(), bi->second.tensor().voigt(),
                                    mesh.inclusion_fraction()),
                      "B_hom");
  return energy;
}

Rank4 assemble_C_hom(const StructuredMesh& mesh, const std::array<FeField, 2>& chi,
                     const std::array<FeField, 3>& V, const std::array<FeField, 3>& p,
                     const PhaseCoefficients& coeffs, CHomMode mode) {
  require_fields(chi, "chi");
  require_fields(p, "p");
  if (mode == CHomMode::WeakFormConsistent) require_fields(V, "V");
  const PhaseTensor b = coeffs.b_tensors();
  const PhaseTensor c = coeffs.c_tensors();

  Eigen::Matrix3d out = Eigen::Matrix3d::Zero();
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto bt = b.find(mesh.element_phase[e]);
    const auto ct = c.find(mesh.element_phase[e]);
    for (const GaussPoint& q : element_quadrature(mesh, e)) {
      Eigen::Vector3d bracket[3];
      for (int v = 0; v < 3; ++v) {
        const auto [i, j] = voigt_pair(v);
        bracket[v] = Eigen::Vector3d::Zero();
        if (bt != b.end()) bracket[v] += bt->second.contract(strain_at(mesh, p[v], e, q));
        if (ct != c.end()) bracket[v] += ct->second.contract(chi_dyad_strain(mesh, chi, i, j, q.x));
      }
      for (int vi = 0; vi < 3; ++vi)
        for (int vj = 0; vj < 3; ++vj) {
          if (mode == CHomMode::Eq31Verbatim) {
            out(vi, vj) += q.w * stress_dot(bracket[vi], bracket[vj]);
          } else {
            const Eigen::Vector3d corrected = canonical_strain(vj) - strain_at(mesh, V[vj], e, q);
            out(vi, vj) += q.w * bracket[vi].dot(corrected);
          }
        }
    }
  }
  return Rank4(out);
}

namespace {

Rank4 rigid_pairing_tensor(const StructuredMesh& mesh, const std::array<FeField, 3>& fields,
                           const Rank4& r, RTDomain domain) {
  PhaseTensor coeff{{Phase::Inclusion, r}};
  if (domain == RTDomain::FullCell) coeff[Phase::Matrix] = r;
  return corrector_energy_tensor(mesh, fields, coeff, nullptr);
}

}  // namespace

Rank4 assemble_R_hom(const StructuredMesh& mesh, const std::array<FeField, 3>& W,
                     const PhaseCoefficients& coeffs, RTDomain domain) {
  require_fields(W, "W");
  const Rank4 out = rigid_pairing_tensor(mesh, W, coeffs.R.tensor(), domain);
  const double scale = 1.0 + out.max_abs();
  if (out.major_symmetry_defect() > 1e-10 * scale)
    throw Error(ErrorCode::BoundsViolation, "R_hom lacks major symmetry");
  if (out.min_eigenvalue() < -1e-10 * scale)
    throw Error(ErrorCode::BoundsViolation, "R_hom is not positive semidefinite");
  return out;
}

Rank4 assemble_T_hom(const StructuredMesh& mesh, const std::array<FeField, 3>& V,
                     const PhaseCoefficients& coeffs, RTDomain domain) {
  require_fields(V, "V");
  const Rank4 out = rigid_pairing_tensor(mesh, V, coeffs.R.tensor(), domain);
  const double scale = 1.0 + out.max_abs();
  if (out.major_symmetry_defect() > 1e-10 * scale)
    throw Error(ErrorCode::BoundsViolation, "T_hom lacks major symmetry");
  return out;
}

EffectiveTensors assemble_effective_tensors(const StructuredMesh& mesh, const CorrectorSet& correctors,
                                            const PhaseCoefficients& coeffs, CHomMode mode,
                                            RTDomain domain) {
  EffectiveTensors t;
  t.c_mode = mode;
  t.rt_domain = domain;
  t.a_hom = assemble_a_hom(mesh, correctors.chi, coeffs, &t.a_hom_averaging);
  t.b_hom = assemble_B_hom(mesh, correctors.V, coeffs, &t.b_hom_averaging);
  t.c_hom_weak = assemble_C_hom(mesh, correctors.chi, correctors.V, correctors.p, coeffs,
                                CHomMode::WeakFormConsistent);
  t.c_hom_verbatim =
      assemble_C_hom(mesh, correctors.chi, correctors.V, correctors.p, coeffs, CHomMode::Eq31Verbatim);
  t.r_hom_inclusion = assemble_R_hom(mesh, correctors.W, coeffs, RTDomain::InclusionOnly);
  t.r_hom_full = assemble_R_hom(mesh, correctors.W, coeffs, RTDomain::FullCell);
  t.t_hom_inclusion = assemble_T_hom(mesh, correctors.V, coeffs, RTDomain::InclusionOnly);
  t.t_hom_full = assemble_T_hom(mesh, correctors.V, coeffs, RTDomain::FullCell);
  return t;
}

BoundInterval voigt_reuss_bounds(double matrix_value, double inclusion_value, double inclusion_fraction) {
  if (!(inclusion_fraction >= 0.0 && inclusion_fraction <= 1.0))
    throw Error(ErrorCode::ValidationError, "inclusion fraction must lie in [0, 1]");
  const double tf = 1.0 - inclusion_fraction, ts = inclusion_fraction;
  BoundInterval b;
  b.voigt = tf * matrix_value + ts * inclusion_value;
  b.reuss = 1.0 / (tf / matrix_value + ts / inclusion_value);
  return b;
}

}  // namespace hichom
