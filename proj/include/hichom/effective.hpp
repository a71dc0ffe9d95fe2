#pragma once

#include "hichom/cell.hpp"
#include "hichom/coefficients.hpp"

namespace hichom {

// The printed effective electrostriction tensor multiplies two stress-like
// brackets; the weak-form-consistent variant tests the averaged bracket
// against corrected macroscopic strains (the form the macro limit equation
// actually consumes). Both are assembled and reported.
enum class CHomMode { Eq31Verbatim, WeakFormConsistent };

// Integration domain of the rigid-inclusion tensors: the printed formulas
// integrate over Y, the derivation restricts to Y_s.
enum class RTDomain { FullCell, InclusionOnly };

struct EffectiveTensors {
  Mat2 a_hom = Mat2::Identity();      // energy form
  Mat2 a_hom_averaging = Mat2::Identity();
  Rank4 b_hom;                        // energy form
  Rank4 b_hom_averaging;
  Rank4 c_hom_weak;
  Rank4 c_hom_verbatim;
  Rank4 r_hom_inclusion, r_hom_full;
  Rank4 t_hom_inclusion, t_hom_full;
  CHomMode c_mode = CHomMode::WeakFormConsistent;
  RTDomain rt_domain = RTDomain::InclusionOnly;

  const Rank4& c_hom() const { return c_mode == CHomMode::Eq31Verbatim ? c_hom_verbatim : c_hom_weak; }
  const Rank4& r_hom() const { return rt_domain == RTDomain::FullCell ? r_hom_full : r_hom_inclusion; }
  const Rank4& t_hom() const { return rt_domain == RTDomain::FullCell ? t_hom_full : t_hom_inclusion; }
};

// (a^hom)_ij = int_Y a (e^i + grad chi^i) . (e^j + grad chi^j). Also computes
// the averaging form int_Y a (e^i + grad chi^i) . e^j and checks agreement to
// 1e-8; validates symmetry, positive definiteness, and (for genuinely
// two-phase coefficients) the arithmetic/harmonic mean bounds.
Mat2 assemble_a_hom(const StructuredMesh& mesh, const std::array<FeField, 2>& chi,
                    const PhaseCoefficients& coeffs, Mat2* averaging_out = nullptr);

Rank4 assemble_B_hom(const StructuredMesh& mesh, const std::array<FeField, 3>& V,
                     const PhaseCoefficients& coeffs, Rank4* averaging_out = nullptr);

Rank4 assemble_C_hom(const StructuredMesh& mesh, const std::array<FeField, 2>& chi,
                     const std::array<FeField, 3>& V, const std::array<FeField, 3>& p,
                     const PhaseCoefficients& coeffs, CHomMode mode);

Rank4 assemble_R_hom(const StructuredMesh& mesh, const std::array<FeField, 3>& W,
                     const PhaseCoefficients& coeffs, RTDomain domain);

Rank4 assemble_T_hom(const StructuredMesh& mesh, const std::array<FeField, 3>& V,
                     const PhaseCoefficients& coeffs, RTDomain domain);

EffectiveTensors assemble_effective_tensors(const StructuredMesh& mesh, const CorrectorSet& correctors,
                                            const PhaseCoefficients& coeffs,
                                            CHomMode mode = CHomMode::WeakFormConsistent,
                                            RTDomain domain = RTDomain::InclusionOnly);

// Classical arithmetic (Voigt) / harmonic (Reuss) phase means per entry.
struct BoundInterval {
  double reuss = 0.0;
  double voigt = 0.0;
};

BoundInterval voigt_reuss_bounds(double matrix_value, double inclusion_value, double inclusion_fraction);

}  // namespace hichom
