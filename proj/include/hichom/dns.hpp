#pragma once

#include <functional>

#include "hichom/coefficients.hpp"
#include "hichom/fem.hpp"
#include "hichom/geometry.hpp"

namespace hichom {

// Fine-scale problem at microstructure size eps = edge_length / k: oscillatory
// coefficients sampled from the unit cell, inclusion stiffness scaled by
// eps^{-2 gamma}, Dirichlet data as in the macro problem.
struct DnsProblem {
  double epsilon = 0.5;
  int cells_per_period = 8;  // fine elements per cell edge (m)
  UnitCellGeometry geometry;
  PhaseCoefficients coeffs;
  std::function<double(const Vec2&)> f;
  std::function<Vec2(const Vec2&)> g;
  std::function<double(const Vec2&)> h;
  double edge_length = 1.0;

  void validate() const;  // whole cells only; m >= 4
  int periods() const;    // k = edge_length / epsilon
  int fine_n() const { return periods() * cells_per_period; }
  double contrast_multiplier() const;  // eps^{-2 gamma}
};

// Element phase labels of the fine mesh: Inclusion iff the element centroid,
// mapped to the unit cell by x -> frac(x / eps), lies in Y_s. Computed from
// integer cell indices so the labels are exactly periodic.
std::vector<Phase> sample_oscillatory_phase(const DnsProblem& problem);

MeshPtr build_dns_mesh(const DnsProblem& problem);

struct DnsSolution {
  FeField phi, u, v, w;
  double epsilon = 0.0;
  double gamma = 1.0;
};

FeField solve_phi_eps(const DnsProblem& problem, MeshPtr mesh, const SolverConfig& cfg);
FeField solve_u_eps(const DnsProblem& problem, MeshPtr mesh, const FeField& phi_eps, const SolverConfig& cfg);
FeField solve_v_eps(const DnsProblem& problem, MeshPtr mesh, const FeField& phi_eps, const SolverConfig& cfg);
FeField split_w_eps(const FeField& u_eps, const FeField& v_eps, double gamma, double epsilon);

DnsSolution solve_dns(const DnsProblem& problem, MeshPtr mesh, const SolverConfig& cfg);

// Fine-scale elasticity operator B + multiplier * R 1_{Y_s}; the multiplier is
// a parameter so contrast-monotonicity checks can drive it directly.
SparseOperator assemble_dns_elasticity(const StructuredMesh& mesh, const PhaseCoefficients& coeffs,
                                       double inclusion_multiplier);

// max |u - (v + eps^gamma w)| / max(1, |u|_inf): the splitting identity defect.
double splitting_residual(const DnsSolution& sol);

// int_{inclusion elements} |D(u)|^2 (strain energy density of the stiff phase).
double inclusion_strain_energy(const StructuredMesh& mesh, const FeField& u);

}  // namespace hichom
