#pragma once

#include <array>

#include "hichom/coefficients.hpp"
#include "hichom/fem.hpp"
#include "hichom/geometry.hpp"

namespace hichom {

// Voigt pair order used for the corrector families: 0 -> (0,0), 1 -> (1,1),
// 2 -> (0,1). The (1,0) member is shared with (0,1) (symmetric loading).
inline std::array<int, 2> voigt_pair(int v) {
  switch (v) {
    case 0: return {0, 0};
    case 1: return {1, 1};
    default: return {0, 1};
  }
}

// Solved periodic cell fields: scalar correctors chi^i, elastic correctors
// V^{ij}, electrostriction correctors p^{ij}, and rigid-inclusion correctors
// W^{ij}. chi/V/p are zero-mean quotient representatives; W vanishes on the
// matrix region (or is zero-mean when the inclusion covers the whole cell).
struct CorrectorSet {
  MeshPtr mesh;
  PeriodicDofMap map;
  std::array<FeField, 2> chi;
  std::array<FeField, 3> V;
  std::array<FeField, 3> p;
  std::array<FeField, 3> W;
  bool w_frozen_on_matrix = false;

  const FeField& v_field(int i, int j) const { return V[voigt_index(i, j)]; }
  const FeField& p_field(int i, int j) const { return p[voigt_index(i, j)]; }
  const FeField& w_field(int i, int j) const { return W[voigt_index(i, j)]; }
};

std::array<FeField, 2> solve_chi(MeshPtr mesh, const PeriodicDofMap& map, const PhaseCoefficients& coeffs,
                                 const SolverConfig& cfg);

std::array<FeField, 3> solve_V(MeshPtr mesh, const PeriodicDofMap& map, const PhaseCoefficients& coeffs,
                               const SolverConfig& cfg);

std::array<FeField, 3> solve_p(MeshPtr mesh, const PeriodicDofMap& map, const PhaseCoefficients& coeffs,
                               const std::array<FeField, 2>& chi, const SolverConfig& cfg);

std::array<FeField, 3> solve_W(MeshPtr mesh, const PeriodicDofMap& map, const PhaseCoefficients& coeffs,
                               const SolverConfig& cfg);

// Solves all families. The four families are independent; with threads > 1
// they run concurrently (p waits on chi).
CorrectorSet solve_cell_problems(MeshPtr mesh, const PhaseCoefficients& coeffs, const SolverConfig& cfg,
                                 int threads = 1);

// Largest |slave - master| over all nodes and components (periodicity check).
double periodicity_defect(const StructuredMesh& mesh, const PeriodicDofMap& map, const FeField& field);

// Symmetrized dyad of the corrected gradients (e^i + grad chi^i) at a point,
// in Voigt strain form; the electrostriction source of the p problems.
Eigen::Vector3d chi_dyad_strain(const StructuredMesh& mesh, const std::array<FeField, 2>& chi, int i, int j,
                                const Vec2& y);

}  // namespace hichom
