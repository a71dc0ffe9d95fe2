#pragma once

#include <map>
#include <string>

#include "hichom/dns.hpp"
#include "hichom/effective.hpp"
#include "hichom/macro.hpp"

namespace hichom {

// L2 distance between a fine-mesh field and a field on another (typically
// coarser) mesh over the same domain, by quadrature on the fine mesh.
double l2_difference_scalar(const StructuredMesh& fine_mesh, const FeField& fine,
                            const StructuredMesh& other_mesh, const FeField& other);
double l2_difference_vector(const StructuredMesh& fine_mesh, const FeField& fine,
                            const StructuredMesh& other_mesh, const FeField& other);
double h1_distance_vector(const StructuredMesh& fine_mesh, const FeField& fine,
                          const StructuredMesh& other_mesh, const FeField& other);

// Two-scale corrector diagnostic for the potential:
//   corrected   = | grad phi_eps - [grad phi0 + (d phi0 / d x_i) grad_y chi^i(x/eps)] |_L2
//   uncorrected = | grad phi_eps - grad phi0 |_L2
// with grad_y chi evaluated by periodic lookup at quadrature points.
struct CorrectorResidual {
  double corrected = 0.0;
  double uncorrected = 0.0;
};

CorrectorResidual corrector_residual(const StructuredMesh& fine_mesh, const FeField& phi_eps,
                                     const StructuredMesh& macro_mesh, const FeField& phi0,
                                     const StructuredMesh& cell_mesh, const std::array<FeField, 2>& chi,
                                     double epsilon);

// |EnergyForm - AveragingForm| for a_hom / B_hom, the C_hom mode gap, and the
// R_hom / T_hom domain gaps (diagnostic).
std::map<std::string, double> tensor_cross_check(const EffectiveTensors& tensors);
std::map<std::string, double> tensor_cross_check(const StructuredMesh& mesh, const CorrectorSet& correctors,
                                                 const PhaseCoefficients& coeffs);

struct StudySetup {
  UnitCellGeometry geometry;
  PhaseCoefficients coeffs;
  int cell_n = 64;
  int macro_n = 64;
  double edge_length = 1.0;
  std::vector<double> epsilons = {0.5, 0.25, 0.125};
  int cells_per_period = 8;
  SolverConfig solver;
  CHomMode c_mode = CHomMode::WeakFormConsistent;
  RTDomain rt_domain = RTDomain::InclusionOnly;
  std::function<double(const Vec2&)> f;
  std::function<Vec2(const Vec2&)> g;
  std::function<double(const Vec2&)> h;
  bool with_elasticity = true;
  int threads = 1;
  // Invoked sequentially (ladder order) once all entries are solved; used for
  // optional per-epsilon snapshot output.
  std::function<void(size_t index, const StructuredMesh&, const DnsSolution&)> on_entry;
};

struct ConvergenceReport {
  std::vector<double> epsilons;
  std::vector<double> phi_l2_errors;
  std::vector<double> u_l2_errors;
  std::vector<double> u_h1_distances;  // reported, exempt from monotonicity
  std::vector<double> corrector_residuals;
  std::vector<double> uncorrected_grad_errors;
  std::vector<double> phi_h1_norms;
  std::vector<double> u_h1_norms;
  std::vector<double> w_scaled_h1_norms;  // |eps^gamma w_eps|_H1
  std::vector<double> splitting_residuals;
  std::map<std::string, double> tensor_cross_checks;
  bool phi_monotone = false;
  bool u_monotone = false;
  bool corrector_improves = false;  // corrected < uncorrected at every eps
  double bound_monitor_ratio = 0.0;  // max/min of (|u|_H1 + |phi|_H1)
  double w_monitor_ratio = 0.0;      // max/min of |eps^gamma w|_H1
  EffectiveTensors tensors;
};

// Runs the ladder: solves the cell problems once, the homogenized system once
// on a mesh at least as fine as the finest DNS mesh, then one DNS per epsilon,
// and compares. Ladder entries run concurrently when threads > 1.
ConvergenceReport run_convergence_study(const StudySetup& setup);

}  // namespace hichom
