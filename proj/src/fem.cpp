#include "hichom/fem.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/IterativeLinearSolvers>
#include <algorithm>
#include <cmath>

#include "hichom/errors.hpp"

namespace hichom {

FeField make_field(MeshPtr mesh, int components) {
  FeField f;
  f.mesh = std::move(mesh);
  f.components = components;
  f.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(f.mesh->node_count()) * components);
  return f;
}

double SparseOperator::symmetry_defect() const {
  Eigen::SparseMatrix<double> diff = Eigen::SparseMatrix<double>(matrix.transpose()) - matrix;
  double defect = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it)
      defect = std::max(defect, std::abs(it.value()));
  return defect;
}

void SolverConfig::validate() const {
  if (!(tolerance > 0.0 && tolerance <= 1e-4))
    throw Error(ErrorCode::ValidationError, "solver.tolerance must lie in (0, 1e-4]");
  if (quadrature_order < 2) throw Error(ErrorCode::ValidationError, "solver.quadratureOrder must be >= 2");
  if (max_iterations < 1) throw Error(ErrorCode::ValidationError, "solver.maxIterations must be >= 1");
}

namespace {

struct Rule1d {
  std::vector<double> pos, w;  // on [-1, 1]
};

const Rule1d& gauss_rule(int points) {
  static const Rule1d g2{{-1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)}, {1.0, 1.0}};
  static const Rule1d g3{{-std::sqrt(0.6), 0.0, std::sqrt(0.6)}, {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}};
  static const Rule1d g4{
      {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526},
      {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538}};
  switch (points) {
    case 2: return g2;
    case 3: return g3;
    case 4: return g4;
    default: throw Error(ErrorCode::ValidationError, "quadrature supports 2..4 points per dimension");
  }
}

// Reference Q1 shapes on [-1,1]^2, corner order SW, SE, NE, NW.
Eigen::Vector4d shape_values(double xi, double eta) {
  return {0.25 * (1 - xi) * (1 - eta), 0.25 * (1 + xi) * (1 - eta), 0.25 * (1 + xi) * (1 + eta),
          0.25 * (1 - xi) * (1 + eta)};
}

Eigen::Matrix<double, 4, 2> shape_gradients(double xi, double eta) {
  Eigen::Matrix<double, 4, 2> d;
  d << -0.25 * (1 - eta), -0.25 * (1 - xi),  //
      0.25 * (1 - eta), -0.25 * (1 + xi),    //
      0.25 * (1 + eta), 0.25 * (1 + xi),     //
      -0.25 * (1 + eta), 0.25 * (1 - xi);
  return d;
}

const Mat2* phase_coeff(const PhaseMatrix& map, Phase p) {
  auto it = map.find(p);
  return it == map.end() ? nullptr : &it->second;
}

const Rank4* phase_tensor(const PhaseTensor& map, Phase p) {
  auto it = map.find(p);
  return it == map.end() ? nullptr : &it->second;
}

double phase_scale_of(const PhaseScale& map, Phase p) {
  auto it = map.find(p);
  return it == map.end() ? 1.0 : it->second;
}

// 3x8 strain-displacement matrix (Voigt rows e00, e11, 2*e01).
Eigen::Matrix<double, 3, 8> strain_matrix(const Eigen::Matrix<double, 4, 2>& dshape) {
  Eigen::Matrix<double, 3, 8> b = Eigen::Matrix<double, 3, 8>::Zero();
  for (int a = 0; a < 4; ++a) {
    b(0, 2 * a) = dshape(a, 0);
    b(1, 2 * a + 1) = dshape(a, 1);
    b(2, 2 * a) = dshape(a, 1);
    b(2, 2 * a + 1) = dshape(a, 0);
  }
  return b;
}

SparseOperator from_triplets(int dim, std::vector<Eigen::Triplet<double>>& triplets) {
  SparseOperator op;
  op.matrix.resize(dim, dim);
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.matrix.makeCompressed();
  return op;
}

}  // namespace

std::vector<GaussPoint> element_quadrature(const StructuredMesh& mesh, int e, int points_per_dim) {
  const Rule1d& rule = gauss_rule(points_per_dim);
  const double h = mesh.spacing;
  const double jac = h * h / 4.0;     // area mapping from [-1,1]^2
  const double grad_scale = 2.0 / h;  // d(xi)/d(x)
  const Vec2 lower = mesh.nodes[mesh.elements[e][0]];

  std::vector<GaussPoint> pts;
  pts.reserve(static_cast<size_t>(points_per_dim) * points_per_dim);
  for (int qy = 0; qy < points_per_dim; ++qy)
    for (int qx = 0; qx < points_per_dim; ++qx) {
      GaussPoint p;
      const double xi = rule.pos[qx], eta = rule.pos[qy];
      p.w = rule.w[qx] * rule.w[qy] * jac;
      p.x = lower + Vec2((xi + 1) * h / 2, (eta + 1) * h / 2);
      p.shape = shape_values(xi, eta);
      p.dshape = shape_gradients(xi, eta) * grad_scale;
      pts.push_back(p);
    }
  return pts;
}

SparseOperator assemble_scalar_operator(const StructuredMesh& mesh, const PhaseMatrix& coeff_per_phase) {
  for (const auto& [phase, a] : coeff_per_phase)
    if (!is_spd_2x2(a)) throw Error(ErrorCode::NonSpdCoefficient, "scalar coefficient matrix must be SPD");

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(mesh.element_count()) * 16);
  for (int e = 0; e < mesh.element_count(); ++e) {
    const Mat2* a = phase_coeff(coeff_per_phase, mesh.element_phase[e]);
    if (a == nullptr) continue;
    Eigen::Matrix4d ke = Eigen::Matrix4d::Zero();
    for (const GaussPoint& q : element_quadrature(mesh, e))
      ke += q.w * q.dshape * (*a) * q.dshape.transpose();
    const auto& conn = mesh.elements[e];
    for (int a1 = 0; a1 < 4; ++a1)
      for (int a2 = 0; a2 < 4; ++a2) triplets.emplace_back(conn[a1], conn[a2], ke(a1, a2));
  }
  return from_triplets(mesh.node_count(), triplets);
}

Rank4 elastic_tensor_checked(double lambda, double mu) {
  if (!(mu > 0.0) || lambda < 0.0)
    throw Error(ErrorCode::NonEllipticTensor, "isotropic elastic pair requires mu > 0 and lambda >= 0");
  return Rank4::isotropic(lambda, mu);
}

SparseOperator assemble_elasticity_operator(const StructuredMesh& mesh, const PhaseTensor& tensor_per_phase,
                                            const PhaseScale& phase_scale) {
  for (const auto& [phase, t] : tensor_per_phase) {
    const double scale = std::max(1.0, t.max_abs());
    if (t.min_eigenvalue() < -1e-12 * scale)
      throw Error(ErrorCode::NonEllipticTensor, "elastic coefficient tensor must be positive semidefinite");
  }
  for (const auto& [phase, s] : phase_scale)
    if (!(s > 0.0)) throw Error(ErrorCode::NonEllipticTensor, "phase scale must be positive");

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(mesh.element_count()) * 64);
  for (int e = 0; e < mesh.element_count(); ++e) {
    const Phase phase = mesh.element_phase[e];
    const Rank4* tensor = phase_tensor(tensor_per_phase, phase);
    if (tensor == nullptr) continue;
    Eigen::Matrix<double, 8, 8> ke = Eigen::Matrix<double, 8, 8>::Zero();
    for (const GaussPoint& q : element_quadrature(mesh, e)) {
      const auto b = strain_matrix(q.dshape);
      ke += q.w * b.transpose() * tensor->voigt() * b;
    }
    ke *= phase_scale_of(phase_scale, phase);
    const auto& conn = mesh.elements[e];
    for (int a1 = 0; a1 < 4; ++a1)
      for (int c1 = 0; c1 < 2; ++c1)
        for (int a2 = 0; a2 < 4; ++a2)
          for (int c2 = 0; c2 < 2; ++c2)
            triplets.emplace_back(2 * conn[a1] + c1, 2 * conn[a2] + c2, ke(2 * a1 + c1, 2 * a2 + c2));
  }
  return from_triplets(2 * mesh.node_count(), triplets);
}

Eigen::VectorXd assemble_scalar_source_load(const StructuredMesh& mesh,
                                            const std::function<double(const Vec2&)>& f) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh.node_count());
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto& conn = mesh.elements[e];
    for (const GaussPoint& q : element_quadrature(mesh, e)) {
      const double fv = f(q.x);
      for (int a = 0; a < 4; ++a) load[conn[a]] += q.w * fv * q.shape[a];
    }
  }
  return load;
}

Eigen::VectorXd assemble_vector_source_load(const StructuredMesh& mesh,
                                            const std::function<Vec2(const Vec2&)>& g) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(2 * mesh.node_count());
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto& conn = mesh.elements[e];
    for (const GaussPoint& q : element_quadrature(mesh, e)) {
      const Vec2 gv = g(q.x);
      for (int a = 0; a < 4; ++a)
        for (int c = 0; c < 2; ++c) load[2 * conn[a] + c] += q.w * gv[c] * q.shape[a];
    }
  }
  return load;
}

Eigen::VectorXd assemble_flux_load(const StructuredMesh& mesh, const PhaseMatrix& coeff_per_phase,
                                   const Vec2& direction) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh.node_count());
  for (int e = 0; e < mesh.element_count(); ++e) {
    const Mat2* a = phase_coeff(coeff_per_phase, mesh.element_phase[e]);
    if (a == nullptr) continue;
    const Vec2 flux = (*a) * direction;
    const auto& conn = mesh.elements[e];
    for (const GaussPoint& q : element_quadrature(mesh, e)) {
      const Eigen::Vector4d fe = q.w * q.dshape * flux;
      for (int a1 = 0; a1 < 4; ++a1) load[conn[a1]] += fe[a1];
    }
  }
  return load;
}

Eigen::VectorXd assemble_strain_load(const StructuredMesh& mesh, const PhaseTensor& tensor_per_phase,
                                     const Eigen::Vector3d& voigt_strain) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(2 * mesh.node_count());
  for (int e = 0; e < mesh.element_count(); ++e) {
    const Rank4* tensor = phase_tensor(tensor_per_phase, mesh.element_phase[e]);
    if (tensor == nullptr) continue;
    const Eigen::Vector3d stress = tensor->contract(voigt_strain);
    const auto& conn = mesh.elements[e];
    for (const GaussPoint& q : element_quadrature(mesh, e)) {
      const Eigen::Matrix<double, 8, 1> fe = q.w * strain_matrix(q.dshape).transpose() * stress;
      for (int a = 0; a < 4; ++a)
        for (int c = 0; c < 2; ++c) load[2 * conn[a] + c] += fe[2 * a + c];
    }
  }
  return load;
}

Eigen::VectorXd assemble_stress_load(const StructuredMesh& mesh,
                                     const std::function<Eigen::Vector3d(int, const Vec2&)>& stress) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(2 * mesh.node_count());
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto& conn = mesh.elements[e];
    for (const GaussPoint& q : element_quadrature(mesh, e)) {
      const Eigen::Matrix<double, 8, 1> fe = q.w * strain_matrix(q.dshape).transpose() * stress(e, q.x);
      for (int a = 0; a < 4; ++a)
        for (int c = 0; c < 2; ++c) load[2 * conn[a] + c] += fe[2 * a + c];
    }
  }
  return load;
}

// ---------------------------------------------------------------------------
// Constraints

ConstraintSpec ConstraintSpec::dirichlet_boundary(const StructuredMesh& mesh,
                                                  const std::function<double(const Vec2&)>& h) {
  ConstraintSpec spec;
  for (int v = 0; v < mesh.node_count(); ++v)
    if (mesh.is_boundary_node(v)) spec.fixed.emplace_back(v, 0, h(mesh.nodes[v]));
  return spec;
}

ConstraintSpec ConstraintSpec::dirichlet_boundary(const StructuredMesh& mesh,
                                                  const std::function<Vec2(const Vec2&)>& h) {
  ConstraintSpec spec;
  for (int v = 0; v < mesh.node_count(); ++v)
    if (mesh.is_boundary_node(v)) {
      const Vec2 hv = h(mesh.nodes[v]);
      spec.fixed.emplace_back(v, 0, hv[0]);
      spec.fixed.emplace_back(v, 1, hv[1]);
    }
  return spec;
}

ConstraintSpec ConstraintSpec::periodic_with_pin(const PeriodicDofMap& map) {
  ConstraintSpec spec;
  spec.periodic = &map;
  spec.pin_first_free_node = true;
  return spec;
}

ConstraintSpec ConstraintSpec::phase_frozen(const StructuredMesh& mesh, Phase phase, double value,
                                            int components) {
  std::vector<char> touched(mesh.node_count(), 0);
  for (int e = 0; e < mesh.element_count(); ++e)
    if (mesh.element_phase[e] == phase)
      for (int a : mesh.elements[e]) touched[a] = 1;
  ConstraintSpec spec;
  for (int v = 0; v < mesh.node_count(); ++v)
    if (touched[v])
      for (int c = 0; c < components; ++c) spec.fixed.emplace_back(v, c, value);
  return spec;
}

ConstrainedSystem apply_constraints(const SparseOperator& op, const Eigen::VectorXd& rhs,
                                    const ConstraintSpec& spec, int components, int node_count) {
  const int dim = components * node_count;
  if (op.dim() != dim || rhs.size() != dim)
    throw Error(ErrorCode::MeshMismatch, "operator/rhs size does not match the constraint layout");

  // Resolve node representatives through the periodic identification.
  std::vector<int> rep(node_count);
  for (int v = 0; v < node_count; ++v) rep[v] = spec.periodic ? spec.periodic->master_of[v] : v;

  // Propagate fixed values onto representative classes, checking consistency.
  std::vector<char> is_fixed(dim, 0);
  Eigen::VectorXd fixed_value = Eigen::VectorXd::Zero(dim);
  for (const auto& [node, comp, value] : spec.fixed) {
    const int dof = components * rep[node] + comp;
    if (is_fixed[dof] && fixed_value[dof] != value)
      throw Error(ErrorCode::InconsistentConstraints,
                  "node " + std::to_string(node) + " receives conflicting constraint values");
    is_fixed[dof] = 1;
    fixed_value[dof] = value;
  }

  if (spec.pin_first_free_node) {
    for (int v = 0; v < node_count; ++v) {
      if (rep[v] != v) continue;
      bool free = true;
      for (int c = 0; c < components; ++c) free = free && !is_fixed[components * v + c];
      if (free) {
        for (int c = 0; c < components; ++c) is_fixed[components * v + c] = 1;
        break;
      }
    }
  }

  // Assign reduced indices to free representative dofs.
  std::vector<int> reduced_index(dim, -1);
  int n_reduced = 0;
  for (int v = 0; v < node_count; ++v) {
    if (rep[v] != v) continue;
    for (int c = 0; c < components; ++c) {
      const int dof = components * v + c;
      if (!is_fixed[dof]) reduced_index[dof] = n_reduced++;
    }
  }

  ConstrainedSystem sys;
  sys.offset = Eigen::VectorXd::Zero(dim);
  std::vector<Eigen::Triplet<double>> p_triplets;
  p_triplets.reserve(dim);
  for (int v = 0; v < node_count; ++v)
    for (int c = 0; c < components; ++c) {
      const int dof = components * v + c;
      const int master_dof = components * rep[v] + c;
      if (is_fixed[master_dof])
        sys.offset[dof] = fixed_value[master_dof];
      else
        p_triplets.emplace_back(dof, reduced_index[master_dof], 1.0);
    }
  sys.prolongation.resize(dim, n_reduced);
  sys.prolongation.setFromTriplets(p_triplets.begin(), p_triplets.end());
  sys.prolongation.makeCompressed();

  sys.op.matrix = sys.prolongation.transpose() * op.matrix * sys.prolongation;
  sys.op.matrix.makeCompressed();
  sys.rhs = sys.prolongation.transpose() * (rhs - op.matrix * sys.offset);
  return sys;
}

Eigen::VectorXd ConstrainedSystem::recover(const Eigen::VectorXd& reduced) const {
  return prolongation * reduced + offset;
}

// ---------------------------------------------------------------------------
// Solve

Eigen::VectorXd solve(const SparseOperator& op, const Eigen::VectorXd& rhs, const SolverConfig& cfg) {
  cfg.validate();
  if (op.dim() != rhs.size()) throw Error(ErrorCode::MeshMismatch, "operator/rhs dimension mismatch");
  if (op.dim() == 0) return Eigen::VectorXd();
  if (!rhs.allFinite()) throw Error(ErrorCode::ValidationError, "right-hand side contains non-finite entries");

  Eigen::VectorXd x;
  if (cfg.method == SolverConfig::Method::DirectFactorization) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    ldlt.compute(op.matrix);
    if (ldlt.info() != Eigen::Success)
      throw Error(ErrorCode::SingularSystem, "sparse factorization failed");
    x = ldlt.solve(rhs);
    if (ldlt.info() != Eigen::Success)
      throw Error(ErrorCode::SingularSystem, "sparse back-substitution failed");
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(cfg.tolerance);
    cg.setMaxIterations(cfg.max_iterations);
    cg.compute(op.matrix);
    x = cg.solve(rhs);
    if (cg.info() != Eigen::Success)
      throw Error(ErrorCode::SolverDiverged,
                  "conjugate gradient did not reach tolerance within " + std::to_string(cfg.max_iterations) +
                      " iterations (residual " + std::to_string(cg.error()) + ")");
  }

  const double rhs_norm = rhs.norm();
  if (rhs_norm > 0.0) {
    const double rel = (op.matrix * x - rhs).norm() / rhs_norm;
    const double limit = (cfg.method == SolverConfig::Method::DirectFactorization) ? 1e-6 : 10 * cfg.tolerance;
    if (!(rel <= limit))
      throw Error(ErrorCode::SingularSystem, "solution residual " + std::to_string(rel) + " exceeds limit");
  }
  if (!x.allFinite()) throw Error(ErrorCode::SingularSystem, "solution contains non-finite entries");
  return x;
}

// ---------------------------------------------------------------------------
// Norms and evaluation

namespace {

template <class Accumulate>
double integrate_over_mesh(const StructuredMesh& mesh, int pts, Accumulate&& acc) {
  double total = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e)
    for (const GaussPoint& q : element_quadrature(mesh, e, pts)) total += q.w * acc(e, q);
  return total;
}

void check_field(const StructuredMesh& mesh, const FeField& field) {
  if (field.values.size() != static_cast<Eigen::Index>(mesh.node_count()) * field.components)
    throw Error(ErrorCode::MeshMismatch, "field size does not match mesh");
}

}  // namespace

double l2_norm(const StructuredMesh& mesh, const FeField& field, int pts) {
  check_field(mesh, field);
  const double sq = integrate_over_mesh(mesh, pts, [&](int e, const GaussPoint& q) {
    double s = 0.0;
    for (int c = 0; c < field.components; ++c) {
      double v = 0.0;
      for (int a = 0; a < 4; ++a) v += q.shape[a] * field(mesh.elements[e][a], c);
      s += v * v;
    }
    return s;
  });
  return std::sqrt(sq);
}

double h1_seminorm(const StructuredMesh& mesh, const FeField& field, int pts) {
  check_field(mesh, field);
  const double sq = integrate_over_mesh(mesh, pts, [&](int e, const GaussPoint& q) {
    double s = 0.0;
    for (int c = 0; c < field.components; ++c) {
      Vec2 g = Vec2::Zero();
      for (int a = 0; a < 4; ++a) g += q.dshape.row(a).transpose() * field(mesh.elements[e][a], c);
      s += g.squaredNorm();
    }
    return s;
  });
  return std::sqrt(sq);
}

double h1_norm(const StructuredMesh& mesh, const FeField& field, int pts) {
  const double l2 = l2_norm(mesh, field, pts);
  const double semi = h1_seminorm(mesh, field, pts);
  return std::sqrt(l2 * l2 + semi * semi);
}

double mean_value(const StructuredMesh& mesh, const FeField& field, int component) {
  check_field(mesh, field);
  double total = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e) {
    double avg = 0.0;
    for (int a = 0; a < 4; ++a) avg += field(mesh.elements[e][a], component);
    total += mesh.element_area() * avg / 4.0;  // exact for bilinear integrands
  }
  return total / mesh.total_area();
}

void shift_mean_to_zero(const StructuredMesh& mesh, FeField& field) {
  for (int c = 0; c < field.components; ++c) {
    const double m = mean_value(mesh, field, c);
    for (int v = 0; v < mesh.node_count(); ++v) field.at(v, c) -= m;
  }
}

double integrate_gradient_pairing(const StructuredMesh& mesh, const PhaseMatrix& coeff_per_phase,
                                  const FeField& u, const FeField& v) {
  check_field(mesh, u);
  check_field(mesh, v);
  return integrate_over_mesh(mesh, 2, [&](int e, const GaussPoint& q) {
    auto it = coeff_per_phase.find(mesh.element_phase[e]);
    if (it == coeff_per_phase.end()) return 0.0;
    Vec2 gu = Vec2::Zero(), gv = Vec2::Zero();
    for (int a = 0; a < 4; ++a) {
      gu += q.dshape.row(a).transpose() * u(mesh.elements[e][a], 0);
      gv += q.dshape.row(a).transpose() * v(mesh.elements[e][a], 0);
    }
    return gv.dot(it->second * gu);
  });
}

namespace {

struct LocatedPoint {
  int element;
  Eigen::Vector4d shape;
  Eigen::Matrix<double, 4, 2> dshape;
};

LocatedPoint locate(const StructuredMesh& mesh, const Vec2& x) {
  const double h = mesh.spacing;
  const Vec2 local = x - mesh.origin;
  const int ex = std::clamp(static_cast<int>(std::floor(local[0] / h)), 0, mesh.n - 1);
  const int ey = std::clamp(static_cast<int>(std::floor(local[1] / h)), 0, mesh.n - 1);
  const double xi = std::clamp(2.0 * (local[0] / h - ex) - 1.0, -1.0, 1.0);
  const double eta = std::clamp(2.0 * (local[1] / h - ey) - 1.0, -1.0, 1.0);
  LocatedPoint p;
  p.element = mesh.element_index(ex, ey);
  p.shape = shape_values(xi, eta);
  p.dshape = shape_gradients(xi, eta) * (2.0 / h);
  return p;
}

}  // namespace

double eval_scalar(const StructuredMesh& mesh, const FeField& field, const Vec2& x) {
  const LocatedPoint p = locate(mesh, x);
  double v = 0.0;
  for (int a = 0; a < 4; ++a) v += p.shape[a] * field(mesh.elements[p.element][a], 0);
  return v;
}

Vec2 eval_scalar_gradient(const StructuredMesh& mesh, const FeField& field, const Vec2& x) {
  const LocatedPoint p = locate(mesh, x);
  Vec2 g = Vec2::Zero();
  for (int a = 0; a < 4; ++a) g += p.dshape.row(a).transpose() * field(mesh.elements[p.element][a], 0);
  return g;
}

Vec2 eval_vector(const StructuredMesh& mesh, const FeField& field, const Vec2& x) {
  const LocatedPoint p = locate(mesh, x);
  Vec2 v = Vec2::Zero();
  for (int a = 0; a < 4; ++a)
    for (int c = 0; c < 2; ++c) v[c] += p.shape[a] * field(mesh.elements[p.element][a], c);
  return v;
}

Mat2 eval_vector_gradient(const StructuredMesh& mesh, const FeField& field, const Vec2& x) {
  const LocatedPoint p = locate(mesh, x);
  Mat2 g = Mat2::Zero();
  for (int a = 0; a < 4; ++a)
    for (int c = 0; c < 2; ++c) g.row(c) += p.dshape.row(a) * field(mesh.elements[p.element][a], c);
  return g;
}

double l2_error(const StructuredMesh& mesh, const FeField& field,
                const std::function<double(const Vec2&)>& exact, int pts) {
  check_field(mesh, field);
  const double sq = integrate_over_mesh(mesh, pts, [&](int e, const GaussPoint& q) {
    double v = 0.0;
    for (int a = 0; a < 4; ++a) v += q.shape[a] * field(mesh.elements[e][a], 0);
    const double d = v - exact(q.x);
    return d * d;
  });
  return std::sqrt(sq);
}

double l2_error_vector(const StructuredMesh& mesh, const FeField& field,
                       const std::function<Vec2(const Vec2&)>& exact, int pts) {
  check_field(mesh, field);
  const double sq = integrate_over_mesh(mesh, pts, [&](int e, const GaussPoint& q) {
    Vec2 v = Vec2::Zero();
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 2; ++c) v[c] += q.shape[a] * field(mesh.elements[e][a], c);
    return (v - exact(q.x)).squaredNorm();
  });
  return std::sqrt(sq);
}

double h1_seminorm_error(const StructuredMesh& mesh, const FeField& field,
                         const std::function<Vec2(const Vec2&)>& exact_gradient, int pts) {
  check_field(mesh, field);
  const double sq = integrate_over_mesh(mesh, pts, [&](int e, const GaussPoint& q) {
    Vec2 g = Vec2::Zero();
    for (int a = 0; a < 4; ++a) g += q.dshape.row(a).transpose() * field(mesh.elements[e][a], 0);
    return (g - exact_gradient(q.x)).squaredNorm();
  });
  return std::sqrt(sq);
}

}  // namespace hichom
