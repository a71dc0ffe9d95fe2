#include "hichom/macro.hpp"

#include "hichom/errors.hpp"

namespace hichom {

namespace {

PhaseMatrix constant_scalar_coeff(const Mat2& a) {
  return {{Phase::Matrix, a}, {Phase::Inclusion, a}};
}

PhaseTensor constant_tensor_coeff(const Rank4& t) {
  return {{Phase::Matrix, t}, {Phase::Inclusion, t}};
}

FeField solve_dirichlet(MeshPtr mesh, const SparseOperator& op, const Eigen::VectorXd& load,
                        const ConstraintSpec& spec, int components, const SolverConfig& cfg) {
  const ConstrainedSystem sys = apply_constraints(op, load, spec, components, mesh->node_count());
  FeField out;
  out.mesh = std::move(mesh);
  out.components = components;
  out.values = sys.recover(solve(sys.op, sys.rhs, cfg));
  return out;
}

}  // namespace

FeField solve_phi0(const MacroProblem& problem, const SolverConfig& cfg) {
  const SparseOperator op = assemble_scalar_operator(*problem.mesh, constant_scalar_coeff(problem.tensors.a_hom));
  const Eigen::VectorXd load = assemble_scalar_source_load(*problem.mesh, problem.f);
  const ConstraintSpec spec = ConstraintSpec::dirichlet_boundary(*problem.mesh, problem.h);
  return solve_dirichlet(problem.mesh, op, load, spec, 1, cfg);
}

Eigen::VectorXd electrostriction_load(const MacroProblem& problem, const FeField& phi0) {
  const Rank4& c = problem.tensors.c_hom();
  const auto stress = [&](int, const Vec2& x) -> Eigen::Vector3d {
    const Vec2 grad = eval_scalar_gradient(*problem.mesh, phi0, x);
    return c.contract(strain_to_voigt(grad * grad.transpose()));
  };
  return -assemble_stress_load(*problem.mesh, stress);
}

FeField solve_v0(const MacroProblem& problem, const FeField& phi0, const SolverConfig& cfg) {
  const SparseOperator op =
      assemble_elasticity_operator(*problem.mesh, constant_tensor_coeff(problem.tensors.b_hom));
  Eigen::VectorXd load = assemble_vector_source_load(*problem.mesh, problem.g);
  load += electrostriction_load(problem, phi0);
  const ConstraintSpec spec =
      ConstraintSpec::dirichlet_boundary(*problem.mesh, std::function<Vec2(const Vec2&)>([](const Vec2&) {
        return Vec2::Zero().eval();
      }));
  return solve_dirichlet(problem.mesh, op, load, spec, 2, cfg);
}

FeField solve_w0(const MacroProblem& problem, const FeField& v0, const SolverConfig& cfg) {
  const Rank4& r = problem.tensors.r_hom();
  if (r.min_eigenvalue() <= 1e-10)
    throw Error(ErrorCode::DegenerateRHom,
                "R_hom is not positive definite on symmetric matrices (smallest Voigt eigenvalue " +
                    std::to_string(r.min_eigenvalue()) + ")");

  const Rank4& t = problem.tensors.t_hom();
  const SparseOperator op = assemble_elasticity_operator(*problem.mesh, constant_tensor_coeff(r));
  const auto stress = [&](int, const Vec2& x) -> Eigen::Vector3d {
    const Mat2 grad = eval_vector_gradient(*problem.mesh, v0, x);
    return t.contract(strain_to_voigt(0.5 * (grad + grad.transpose())));
  };
  const Eigen::VectorXd load = -assemble_stress_load(*problem.mesh, stress);
  const ConstraintSpec spec =
      ConstraintSpec::dirichlet_boundary(*problem.mesh, std::function<Vec2(const Vec2&)>([](const Vec2&) {
        return Vec2::Zero().eval();
      }));
  return solve_dirichlet(problem.mesh, op, load, spec, 2, cfg);
}

FeField compose_u0(const FeField& v0, const FeField& w0) {
  if (!v0.mesh || !w0.mesh || v0.mesh->node_count() != w0.mesh->node_count() ||
      v0.components != w0.components)
    throw Error(ErrorCode::MeshMismatch, "v0 and w0 live on different meshes");
  FeField u0 = v0;
  u0.values += w0.values;
  return u0;
}

MacroSolution solve_macro(const MacroProblem& problem, const SolverConfig& cfg) {
  MacroSolution sol;
  sol.phi0 = solve_phi0(problem, cfg);
  sol.v0 = solve_v0(problem, sol.phi0, cfg);
  sol.w0 = solve_w0(problem, sol.v0, cfg);
  sol.w0_solved = true;
  sol.u0 = compose_u0(sol.v0, sol.w0);
  return sol;
}

}  // namespace hichom
