#include "hichom/cell.hpp"

#include <future>

#include "hichom/errors.hpp"

namespace hichom {

namespace {

FeField recovered_field(MeshPtr mesh, int components, const ConstrainedSystem& sys,
                        const Eigen::VectorXd& reduced) {
  FeField f;
  f.mesh = std::move(mesh);
  f.components = components;
  f.values = sys.recover(reduced);
  return f;
}

}  // namespace

std::array<FeField, 2> solve_chi(MeshPtr mesh, const PeriodicDofMap& map, const PhaseCoefficients& coeffs,
                                 const SolverConfig& cfg) {
  coeffs.validate();
  const SparseOperator op = assemble_scalar_operator(*mesh, coeffs.a);
  const ConstraintSpec spec = ConstraintSpec::periodic_with_pin(map);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(op.dim());

  std::array<FeField, 2> chi;
  const ConstrainedSystem sys = apply_constraints(op, zero, spec, 1, mesh->node_count());
  for (int i = 0; i < 2; ++i) {
    const Eigen::VectorXd load = -assemble_flux_load(*mesh, coeffs.a, Vec2::Unit(i));
    const Eigen::VectorXd rhs = sys.prolongation.transpose() * load;
    chi[i] = recovered_field(mesh, 1, sys, solve(sys.op, rhs, cfg));
    shift_mean_to_zero(*mesh, chi[i]);
  }
  return chi;
}

std::array<FeField, 3> solve_V(MeshPtr mesh, const PeriodicDofMap& map, const PhaseCoefficients& coeffs,
                               const SolverConfig& cfg) {
  coeffs.validate();
  const PhaseTensor b = coeffs.b_tensors();
  const SparseOperator op = assemble_elasticity_operator(*mesh, b);
  const ConstraintSpec spec = ConstraintSpec::periodic_with_pin(map);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(op.dim());
  const ConstrainedSystem sys = apply_constraints(op, zero, spec, 2, mesh->node_count());

  std::array<FeField, 3> fields;
  for (int v = 0; v < 3; ++v) {
    const Eigen::VectorXd load = assemble_strain_load(*mesh, b, canonical_strain(v));
    const Eigen::VectorXd rhs = sys.prolongation.transpose() * load;
    fields[v] = recovered_field(mesh, 2, sys, solve(sys.op, rhs, cfg));
    shift_mean_to_zero(*mesh, fields[v]);
  }
  return fields;
}

Eigen::Vector3d chi_dyad_strain(const StructuredMesh& mesh, const std::array<FeField, 2>& chi, int i, int j,
                                const Vec2& y) {
  const Vec2 gi = Vec2::Unit(i) + eval_scalar_gradient(mesh, chi[i], y);
  const Vec2 gj = Vec2::Unit(j) + eval_scalar_gradient(mesh, chi[j], y);
  const Mat2 dyad = 0.5 * (gi * gj.transpose() + gj * gi.transpose());
  return strain_to_voigt(dyad);
}

std::array<FeField, 3> solve_p(MeshPtr mesh, const PeriodicDofMap& map, const PhaseCoefficients& coeffs,
                               const std::array<FeField, 2>& chi, const SolverConfig& cfg) {
  coeffs.validate();
  if (!chi[0].mesh || !chi[1].mesh)
    throw Error(ErrorCode::MissingChi, "p cell problems require solved chi correctors");
  if (chi[0].mesh->node_count() != mesh->node_count())
    throw Error(ErrorCode::MeshMismatch, "chi correctors live on a different mesh");

  const PhaseTensor b = coeffs.b_tensors();
  const PhaseTensor c = coeffs.c_tensors();
  const SparseOperator op = assemble_elasticity_operator(*mesh, b);
  const ConstraintSpec spec = ConstraintSpec::periodic_with_pin(map);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(op.dim());
  const ConstrainedSystem sys = apply_constraints(op, zero, spec, 2, mesh->node_count());

  std::array<FeField, 3> fields;
  for (int v = 0; v < 3; ++v) {
    const auto [i, j] = voigt_pair(v);
    const auto source = [&](int e, const Vec2& y) -> Eigen::Vector3d {
      auto it = c.find(mesh->element_phase[e]);
      if (it == c.end()) return Eigen::Vector3d::Zero();
      return it->second.contract(chi_dyad_strain(*mesh, chi, i, j, y));
    };
    const Eigen::VectorXd load = -assemble_stress_load(*mesh, source);
    const Eigen::VectorXd rhs = sys.prolongation.transpose() * load;
    fields[v] = recovered_field(mesh, 2, sys, solve(sys.op, rhs, cfg));
    shift_mean_to_zero(*mesh, fields[v]);
  }
  return fields;
}

std::array<FeField, 3> solve_W(MeshPtr mesh, const PeriodicDofMap& map, const PhaseCoefficients& coeffs,
                               const SolverConfig& cfg) {
  coeffs.validate();
  if (mesh->inclusion_element_count() == 0)
    throw Error(ErrorCode::EmptyInclusion, "W cell problems require a nonempty inclusion phase");
  if (!(coeffs.R.mu > 0.0))
    throw Error(ErrorCode::NonEllipticTensor, "W cell problems require an elliptic R (mu > 0)");

  const PhaseTensor r = coeffs.r_tensor_inclusion();
  const SparseOperator op = assemble_elasticity_operator(*mesh, r);

  // Fields rigid on the matrix: the quotient representative vanishes on the
  // closed matrix region, i.e. at every node of every Matrix element. When the
  // inclusion covers the whole cell the constraint is empty and the usual
  // periodic quotient (pin + zero mean) applies.
  ConstraintSpec spec = ConstraintSpec::phase_frozen(*mesh, Phase::Matrix, 0.0, 2);
  const bool frozen = !spec.fixed.empty();
  spec.periodic = &map;
  spec.pin_first_free_node = !frozen;

  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(op.dim());
  const ConstrainedSystem sys = apply_constraints(op, zero, spec, 2, mesh->node_count());

  std::array<FeField, 3> fields;
  for (int v = 0; v < 3; ++v) {
    const Eigen::VectorXd load = assemble_strain_load(*mesh, r, canonical_strain(v));
    const Eigen::VectorXd rhs = sys.prolongation.transpose() * load;
    fields[v] = recovered_field(mesh, 2, sys, solve(sys.op, rhs, cfg));
    if (!frozen) shift_mean_to_zero(*mesh, fields[v]);
  }
  return fields;
}

CorrectorSet solve_cell_problems(MeshPtr mesh, const PhaseCoefficients& coeffs, const SolverConfig& cfg,
                                 int threads) {
  CorrectorSet set;
  set.mesh = mesh;
  set.map = build_periodic_map(*mesh);
  set.w_frozen_on_matrix = false;
  for (int e = 0; e < mesh->element_count(); ++e)
    if (mesh->element_phase[e] == Phase::Matrix) {
      set.w_frozen_on_matrix = true;
      break;
    }

  if (threads > 1) {
    auto chi_task = std::async(std::launch::async, [&] { return solve_chi(mesh, set.map, coeffs, cfg); });
    auto v_task = std::async(std::launch::async, [&] { return solve_V(mesh, set.map, coeffs, cfg); });
    auto w_task = std::async(std::launch::async, [&] { return solve_W(mesh, set.map, coeffs, cfg); });
    set.chi = chi_task.get();
    set.p = solve_p(mesh, set.map, coeffs, set.chi, cfg);
    set.V = v_task.get();
    set.W = w_task.get();
  } else {
    set.chi = solve_chi(mesh, set.map, coeffs, cfg);
    set.V = solve_V(mesh, set.map, coeffs, cfg);
    set.p = solve_p(mesh, set.map, coeffs, set.chi, cfg);
    set.W = solve_W(mesh, set.map, coeffs, cfg);
  }
  return set;
}

double periodicity_defect(const StructuredMesh& mesh, const PeriodicDofMap& map, const FeField& field) {
  double defect = 0.0;
  for (int v = 0; v < mesh.node_count(); ++v) {
    const int m = map.master_of[v];
    if (m == v) continue;
    for (int c = 0; c < field.components; ++c)
      defect = std::max(defect, std::abs(field(v, c) - field(m, c)));
  }
  return defect;
}

}  // namespace hichom
