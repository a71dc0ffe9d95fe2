#include "hichom/dns.hpp"

#include <cmath>

#include "hichom/errors.hpp"

namespace hichom {

void DnsProblem::validate() const {
  const double k = edge_length / epsilon;
  if (!(epsilon > 0.0) || std::abs(k - std::round(k)) > 1e-9 * std::max(1.0, k) || std::round(k) < 1.0)
    throw Error(ErrorCode::LadderMismatch,
                "epsilon = " + std::to_string(epsilon) + " does not tile the domain with whole cells");
  if (cells_per_period < 4)
    throw Error(ErrorCode::ResolutionTooCoarse, "cellsPerPeriod must be >= 4, got " +
                                                    std::to_string(cells_per_period));
  geometry.validate();
  coeffs.validate();
}

int DnsProblem::periods() const { return static_cast<int>(std::round(edge_length / epsilon)); }

double DnsProblem::contrast_multiplier() const { return std::pow(epsilon, -2.0 * coeffs.gamma); }

std::vector<Phase> sample_oscillatory_phase(const DnsProblem& problem) {
  problem.validate();
  const int m = problem.cells_per_period;
  const int n = problem.fine_n();
  std::vector<Phase> labels(static_cast<size_t>(n) * n, Phase::Matrix);
  for (int ey = 0; ey < n; ++ey)
    for (int ex = 0; ex < n; ++ex) {
      const Vec2 y((ex % m + 0.5) / m, (ey % m + 0.5) / m);
      if (problem.geometry.contains(y)) labels[static_cast<size_t>(ey) * n + ex] = Phase::Inclusion;
    }
  return labels;
}

MeshPtr build_dns_mesh(const DnsProblem& problem) {
  auto mesh = std::const_pointer_cast<StructuredMesh>(build_macro_mesh(problem.edge_length, problem.fine_n()));
  mesh->element_phase = sample_oscillatory_phase(problem);
  return mesh;
}

FeField solve_phi_eps(const DnsProblem& problem, MeshPtr mesh, const SolverConfig& cfg) {
  const SparseOperator op = assemble_scalar_operator(*mesh, problem.coeffs.a);
  const Eigen::VectorXd load = assemble_scalar_source_load(*mesh, problem.f);
  const ConstraintSpec spec = ConstraintSpec::dirichlet_boundary(*mesh, problem.h);
  const ConstrainedSystem sys = apply_constraints(op, load, spec, 1, mesh->node_count());
  FeField phi;
  phi.mesh = std::move(mesh);
  phi.components = 1;
  phi.values = sys.recover(solve(sys.op, sys.rhs, cfg));
  return phi;
}

SparseOperator assemble_dns_elasticity(const StructuredMesh& mesh, const PhaseCoefficients& coeffs,
                                       double inclusion_multiplier) {
  SparseOperator op = assemble_elasticity_operator(mesh, coeffs.b_tensors());
  if (coeffs.R.mu > 0.0 || coeffs.R.lambda > 0.0) {
    const SparseOperator stiffening = assemble_elasticity_operator(
        mesh, coeffs.r_tensor_inclusion(), {{Phase::Inclusion, inclusion_multiplier}});
    op.matrix += stiffening.matrix;
  }
  return op;
}

namespace {

Eigen::VectorXd dns_elastic_load(const DnsProblem& problem, const StructuredMesh& mesh,
                                 const FeField& phi_eps) {
  Eigen::VectorXd load = assemble_vector_source_load(mesh, problem.g);
  const PhaseTensor c = problem.coeffs.c_tensors();
  const auto stress = [&](int e, const Vec2& x) -> Eigen::Vector3d {
    auto it = c.find(mesh.element_phase[e]);
    if (it == c.end()) return Eigen::Vector3d::Zero();
    const Vec2 grad = eval_scalar_gradient(mesh, phi_eps, x);
    return it->second.contract(strain_to_voigt(grad * grad.transpose()));
  };
  load -= assemble_stress_load(mesh, stress);
  return load;
}

FeField solve_elastic(const DnsProblem& problem, MeshPtr mesh, const FeField& phi_eps,
                      double inclusion_multiplier, const SolverConfig& cfg) {
  const SparseOperator op = assemble_dns_elasticity(*mesh, problem.coeffs, inclusion_multiplier);
  const Eigen::VectorXd load = dns_elastic_load(problem, *mesh, phi_eps);
  const ConstraintSpec spec =
      ConstraintSpec::dirichlet_boundary(*mesh, std::function<Vec2(const Vec2&)>([](const Vec2&) {
        return Vec2::Zero().eval();
      }));
  const ConstrainedSystem sys = apply_constraints(op, load, spec, 2, mesh->node_count());
  FeField out;
  out.mesh = std::move(mesh);
  out.components = 2;
  out.values = sys.recover(solve(sys.op, sys.rhs, cfg));
  return out;
}

}  // namespace

FeField solve_u_eps(const DnsProblem& problem, MeshPtr mesh, const FeField& phi_eps,
                    const SolverConfig& cfg) {
  try {
    return solve_elastic(problem, std::move(mesh), phi_eps, problem.contrast_multiplier(), cfg);
  } catch (const Error& err) {
    if (err.code() == ErrorCode::SingularSystem)
      throw Error(ErrorCode::IllConditioned,
                  "fine-scale factorization failed at contrast ratio " +
                      std::to_string(problem.contrast_multiplier()) + ": " + err.message());
    throw;
  }
}

FeField solve_v_eps(const DnsProblem& problem, MeshPtr mesh, const FeField& phi_eps,
                    const SolverConfig& cfg) {
  const SparseOperator op = assemble_elasticity_operator(*mesh, problem.coeffs.b_tensors());
  const Eigen::VectorXd load = dns_elastic_load(problem, *mesh, phi_eps);
  const ConstraintSpec spec =
      ConstraintSpec::dirichlet_boundary(*mesh, std::function<Vec2(const Vec2&)>([](const Vec2&) {
        return Vec2::Zero().eval();
      }));
  const ConstrainedSystem sys = apply_constraints(op, load, spec, 2, mesh->node_count());
  FeField out;
  out.mesh = std::move(mesh);
  out.components = 2;
  out.values = sys.recover(solve(sys.op, sys.rhs, cfg));
  return out;
}

FeField split_w_eps(const FeField& u_eps, const FeField& v_eps, double gamma, double epsilon) {
  if (!u_eps.mesh || !v_eps.mesh || u_eps.mesh->node_count() != v_eps.mesh->node_count())
    throw Error(ErrorCode::MeshMismatch, "u and v live on different meshes");
  FeField w = u_eps;
  w.values = (u_eps.values - v_eps.values) / std::pow(epsilon, gamma);
  return w;
}

DnsSolution solve_dns(const DnsProblem& problem, MeshPtr mesh, const SolverConfig& cfg) {
  DnsSolution sol;
  sol.epsilon = problem.epsilon;
  sol.gamma = problem.coeffs.gamma;
  sol.phi = solve_phi_eps(problem, mesh, cfg);
  sol.u = solve_u_eps(problem, mesh, sol.phi, cfg);
  sol.v = solve_v_eps(problem, mesh, sol.phi, cfg);
  sol.w = split_w_eps(sol.u, sol.v, problem.coeffs.gamma, problem.epsilon);
  return sol;
}

double splitting_residual(const DnsSolution& sol) {
  const double scale = std::max(1.0, sol.u.values.cwiseAbs().maxCoeff());
  const Eigen::VectorXd recombined = sol.v.values + std::pow(sol.epsilon, sol.gamma) * sol.w.values;
  return (sol.u.values - recombined).cwiseAbs().maxCoeff() / scale;
}

double inclusion_strain_energy(const StructuredMesh& mesh, const FeField& u) {
  double total = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e) {
    if (mesh.element_phase[e] != Phase::Inclusion) continue;
    for (const GaussPoint& q : element_quadrature(mesh, e)) {
      Mat2 g = Mat2::Zero();
      for (int a = 0; a < 4; ++a)
        for (int c = 0; c < 2; ++c) g.row(c) += q.dshape.row(a) * u(mesh.elements[e][a], c);
      const Mat2 strain = 0.5 * (g + g.transpose());
      total += q.w * strain.squaredNorm();
    }
  }
  return total;
}

}  // namespace hichom
