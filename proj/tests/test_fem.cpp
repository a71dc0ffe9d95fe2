#include <doctest.h>

#include <cmath>

#include "hichom/errors.hpp"
#include "hichom/fem.hpp"

using namespace hichom;

namespace {

MeshPtr single_element_mesh() {
  auto mesh = std::make_shared<StructuredMesh>();
  mesh->n = 1;
  mesh->edge_length = 1.0;
  mesh->spacing = 1.0;
  mesh->nodes = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  mesh->elements = {{0, 1, 2, 3}};
  mesh->element_phase = {Phase::Matrix};
  return mesh;
}

FeField nodal_scalar(MeshPtr mesh, const std::function<double(const Vec2&)>& fn) {
  FeField f = make_field(mesh, 1);
  for (int v = 0; v < mesh->node_count(); ++v) f.at(v, 0) = fn(mesh->nodes[v]);
  return f;
}

FeField nodal_vector(MeshPtr mesh, const std::function<Vec2(const Vec2&)>& fn) {
  FeField f = make_field(mesh, 2);
  for (int v = 0; v < mesh->node_count(); ++v) {
    const Vec2 val = fn(mesh->nodes[v]);
    f.at(v, 0) = val[0];
    f.at(v, 1) = val[1];
  }
  return f;
}

const PhaseMatrix kIdentityCoeff{{Phase::Matrix, Mat2::Identity()}, {Phase::Inclusion, Mat2::Identity()}};

}  // namespace

TEST_CASE("scalar operator: Q1 Laplacian element stencil") {
  auto mesh = single_element_mesh();
  const SparseOperator op = assemble_scalar_operator(*mesh, kIdentityCoeff);
  const Eigen::Matrix4d expected = (Eigen::Matrix4d() << 4, -1, -2, -1,  //
                                    -1, 4, -1, -2,                       //
                                    -2, -1, 4, -1,                       //
                                    -1, -2, -1, 4)
                                       .finished() /
                                   6.0;
  const Eigen::Matrix4d actual = Eigen::Matrix4d(op.matrix);
  CHECK((actual - expected).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("scalar operator: constants in the kernel, linearity in the coefficient") {
  auto mesh = build_macro_mesh(1.0, 8);
  const SparseOperator op = assemble_scalar_operator(*mesh, kIdentityCoeff);
  CHECK(op.symmetry_defect() <= 1e-14);

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(op.dim());
  CHECK((op.matrix * ones).cwiseAbs().maxCoeff() <= 1e-10);

  const PhaseMatrix tripled{{Phase::Matrix, 3.0 * Mat2::Identity()},
                            {Phase::Inclusion, 3.0 * Mat2::Identity()}};
  const SparseOperator op3 = assemble_scalar_operator(*mesh, tripled);
  Eigen::SparseMatrix<double> diff = op3.matrix - 3.0 * op.matrix;
  double defect = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it)
      defect = std::max(defect, std::abs(it.value()));
  CHECK(defect <= 1e-12);
}

TEST_CASE("scalar operator: assembly is additive in the coefficient") {
  auto mesh = build_unit_cell_mesh(UnitCellGeometry::disk(0.25), 8);
  Mat2 a1, a2;
  a1 << 2.0, 0.3, 0.3, 1.5;
  a2 << 1.0, -0.2, -0.2, 3.0;
  const PhaseMatrix m1{{Phase::Matrix, a1}, {Phase::Inclusion, 2.0 * a1}};
  const PhaseMatrix m2{{Phase::Matrix, a2}, {Phase::Inclusion, 0.5 * a2}};
  PhaseMatrix sum;
  sum[Phase::Matrix] = a1 + a2;
  sum[Phase::Inclusion] = 2.0 * a1 + 0.5 * a2;

  const Eigen::SparseMatrix<double> lhs = assemble_scalar_operator(*mesh, sum).matrix;
  const Eigen::SparseMatrix<double> rhs =
      assemble_scalar_operator(*mesh, m1).matrix + assemble_scalar_operator(*mesh, m2).matrix;
  Eigen::SparseMatrix<double> diff = lhs - rhs;
  double defect = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it)
      defect = std::max(defect, std::abs(it.value()));
  CHECK(defect <= 1e-12);
}

TEST_CASE("scalar operator: rejects non-SPD coefficients") {
  auto mesh = build_macro_mesh(1.0, 4);
  Mat2 bad;
  bad << 1.0, 2.0, 2.0, 1.0;  // indefinite
  CHECK_THROWS_AS(assemble_scalar_operator(*mesh, PhaseMatrix{{Phase::Matrix, bad}}), Error);
}

TEST_CASE("scalar energy: laminate coefficient against the arithmetic mean") {
  auto mesh = build_unit_cell_mesh(UnitCellGeometry::laminate(0.5), 8);
  const PhaseMatrix coeff{{Phase::Matrix, Mat2::Identity()}, {Phase::Inclusion, 4.0 * Mat2::Identity()}};
  const SparseOperator op = assemble_scalar_operator(*mesh, coeff);
  const FeField x1 = nodal_scalar(mesh, [](const Vec2& p) { return p[0]; });
  const double energy = x1.values.dot(op.matrix * x1.values);
  CHECK(energy == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("elasticity operator: rigid motions in the kernel") {
  auto mesh = build_unit_cell_mesh(UnitCellGeometry::disk(0.25), 8);
  const PhaseTensor coeff{{Phase::Matrix, Rank4::isotropic(1.0, 1.0)},
                          {Phase::Inclusion, Rank4::isotropic(2.0, 0.5)}};
  const SparseOperator op = assemble_elasticity_operator(*mesh, coeff);
  CHECK(op.symmetry_defect() <= 1e-13);

  const FeField translation = nodal_vector(mesh, [](const Vec2&) { return Vec2(0.7, -0.3); });
  CHECK((op.matrix * translation.values).cwiseAbs().maxCoeff() <= 1e-10);

  const FeField rotation = nodal_vector(mesh, [](const Vec2& p) { return Vec2(-p[1], p[0]); });
  CHECK((op.matrix * rotation.values).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("elasticity operator: phase scale multiplies element stiffness exactly") {
  auto mesh = build_unit_cell_mesh(UnitCellGeometry::laminate(0.5), 8);
  const PhaseTensor inclusion_only{{Phase::Inclusion, Rank4::isotropic(1.0, 2.0)}};
  const Eigen::SparseMatrix<double> base = assemble_elasticity_operator(*mesh, inclusion_only).matrix;
  const Eigen::SparseMatrix<double> scaled =
      assemble_elasticity_operator(*mesh, inclusion_only, {{Phase::Inclusion, 1e4}}).matrix;
  Eigen::SparseMatrix<double> diff = scaled - 1e4 * base;
  double defect = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it)
      defect = std::max(defect, std::abs(it.value()));
  CHECK(defect == 0.0);  // single post-multiplication, bitwise exact
}

TEST_CASE("elasticity operator: rejects a non-elliptic tensor") {
  auto mesh = build_macro_mesh(1.0, 4);
  Eigen::Matrix3d indefinite;
  indefinite << 1, 0, 0, 0, -1, 0, 0, 0, 1;
  CHECK_THROWS_AS(assemble_elasticity_operator(*mesh, PhaseTensor{{Phase::Matrix, Rank4(indefinite)}}),
                  Error);
  CHECK_THROWS_AS(elastic_tensor_checked(1.0, -0.5), Error);
}

TEST_CASE("constraints: Dirichlet reduction keeps interior unknowns") {
  auto mesh = build_macro_mesh(1.0, 4);
  const SparseOperator op = assemble_scalar_operator(*mesh, kIdentityCoeff);
  const Eigen::VectorXd rhs = Eigen::VectorXd::Zero(op.dim());
  const auto spec =
      ConstraintSpec::dirichlet_boundary(*mesh, std::function<double(const Vec2&)>([](const Vec2&) {
        return 0.0;
      }));
  const ConstrainedSystem sys = apply_constraints(op, rhs, spec, 1, mesh->node_count());
  CHECK(sys.reduced_dim() == 9);
}

TEST_CASE("constraints: periodic reduction with pin") {
  auto mesh = build_unit_cell_mesh(UnitCellGeometry::disk(0.25), 4);
  const PeriodicDofMap map = build_periodic_map(*mesh);
  const SparseOperator op = assemble_scalar_operator(*mesh, kIdentityCoeff);
  const Eigen::VectorXd rhs = Eigen::VectorXd::Zero(op.dim());
  const ConstrainedSystem sys =
      apply_constraints(op, rhs, ConstraintSpec::periodic_with_pin(map), 1, mesh->node_count());
  CHECK(sys.reduced_dim() == 15);  // 16 periodic nodes minus the pin
}

TEST_CASE("constraints: conflicting fixed values on a periodic pair throw") {
  auto mesh = build_unit_cell_mesh(UnitCellGeometry::disk(0.25), 4);
  const PeriodicDofMap map = build_periodic_map(*mesh);
  const SparseOperator op = assemble_scalar_operator(*mesh, kIdentityCoeff);
  const Eigen::VectorXd rhs = Eigen::VectorXd::Zero(op.dim());

  ConstraintSpec spec;
  spec.periodic = &map;
  const int slave = mesh->node_index(4, 1);  // right edge, maps to (0, 1)
  const int master = mesh->node_index(0, 1);
  spec.fixed.emplace_back(master, 0, 0.0);
  spec.fixed.emplace_back(slave, 0, 1.0);
  CHECK_THROWS_AS(apply_constraints(op, rhs, spec, 1, mesh->node_count()), Error);
}

TEST_CASE("constraints: Dirichlet values enter the recovered field exactly") {
  auto mesh = build_macro_mesh(1.0, 8);
  const SparseOperator op = assemble_scalar_operator(*mesh, kIdentityCoeff);
  const Eigen::VectorXd load = Eigen::VectorXd::Zero(op.dim());
  const auto h = std::function<double(const Vec2&)>([](const Vec2& p) { return p[0]; });
  const ConstrainedSystem sys =
      apply_constraints(op, load, ConstraintSpec::dirichlet_boundary(*mesh, h), 1, mesh->node_count());
  const Eigen::VectorXd full = sys.recover(solve(sys.op, sys.rhs, SolverConfig{}));
  // Harmonic linear data: the solution is x0 at every node, exactly.
  for (int v = 0; v < mesh->node_count(); ++v)
    CHECK(full[v] == doctest::Approx(mesh->nodes[v][0]).epsilon(1e-12));
}

TEST_CASE("solve: diagonal systems and both solver paths") {
  SparseOperator op;
  op.matrix.resize(2, 2);
  op.matrix.insert(0, 0) = 2.0;
  op.matrix.insert(1, 1) = 4.0;
  op.matrix.makeCompressed();
  const Eigen::VectorXd rhs = (Eigen::VectorXd(2) << 2.0, 4.0).finished();

  SolverConfig direct;
  const Eigen::VectorXd x = solve(op, rhs, direct);
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));

  SolverConfig cg;
  cg.method = SolverConfig::Method::ConjugateGradient;
  cg.tolerance = 1e-12;
  const Eigen::VectorXd xcg = solve(op, rhs, cg);
  CHECK((xcg - x).cwiseAbs().maxCoeff() <= 1e-10);

  SparseOperator id;
  id.matrix.resize(3, 3);
  id.matrix.setIdentity();
  const Eigen::VectorXd r = (Eigen::VectorXd(3) << 0.5, -2.0, 7.0).finished();
  CHECK((solve(id, r, direct) - r).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("solve: CG with too few iterations reports divergence") {
  auto mesh = build_macro_mesh(1.0, 16);
  const SparseOperator op = assemble_scalar_operator(*mesh, kIdentityCoeff);
  const auto spec =
      ConstraintSpec::dirichlet_boundary(*mesh, std::function<double(const Vec2&)>([](const Vec2&) {
        return 0.0;
      }));
  const Eigen::VectorXd load = assemble_scalar_source_load(*mesh, [](const Vec2&) { return 1.0; });
  const ConstrainedSystem sys = apply_constraints(op, load, spec, 1, mesh->node_count());
  SolverConfig cfg;
  cfg.method = SolverConfig::Method::ConjugateGradient;
  cfg.tolerance = 1e-12;
  cfg.max_iterations = 2;
  CHECK_THROWS_AS(solve(sys.op, sys.rhs, cfg), Error);
}

TEST_CASE("solve: manufactured Poisson solution converges at second order") {
  const auto exact = [](const Vec2& p) { return std::sin(M_PI * p[0]) * std::sin(M_PI * p[1]); };
  const auto source = [&](const Vec2& p) { return 2.0 * M_PI * M_PI * exact(p); };

  std::vector<double> errors;
  for (int n : {16, 32}) {
    auto mesh = build_macro_mesh(1.0, n);
    const SparseOperator op = assemble_scalar_operator(*mesh, kIdentityCoeff);
    const Eigen::VectorXd load = assemble_scalar_source_load(*mesh, source);
    const auto spec =
        ConstraintSpec::dirichlet_boundary(*mesh, std::function<double(const Vec2&)>([](const Vec2&) {
          return 0.0;
        }));
    const ConstrainedSystem sys = apply_constraints(op, load, spec, 1, mesh->node_count());
    FeField phi = make_field(mesh, 1);
    phi.values = sys.recover(solve(sys.op, sys.rhs, SolverConfig{}));
    errors.push_back(l2_error(*mesh, phi, exact));

    // Energy identity: x' K x = rhs' x on the reduced system.
    const Eigen::VectorXd x = solve(sys.op, sys.rhs, SolverConfig{});
    CHECK(x.dot(sys.op.matrix * x) == doctest::Approx(sys.rhs.dot(x)).epsilon(1e-10));
  }
  CHECK(errors[0] < 0.01);
  CHECK(errors[0] / errors[1] == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("norms: constants, linear fields, and the bilinear oracle") {
  auto mesh = build_macro_mesh(1.0, 32);
  const FeField c = nodal_scalar(mesh, [](const Vec2&) { return -2.5; });
  CHECK(l2_norm(*mesh, c) == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(h1_seminorm(*mesh, c) <= 1e-13);

  const FeField x1 = nodal_scalar(mesh, [](const Vec2& p) { return p[0]; });
  CHECK(h1_seminorm(*mesh, x1) == doctest::Approx(1.0).epsilon(1e-13));

  // int (x0 x1)^2 = 1/9 over the unit square, exactly integrated by 2x2 Gauss.
  const FeField xy = nodal_scalar(mesh, [](const Vec2& p) { return p[0] * p[1]; });
  CHECK(l2_norm(*mesh, xy) == doctest::Approx(1.0 / 3.0).epsilon(1e-4));

  CHECK(mean_value(*mesh, xy, 0) == doctest::Approx(0.25).epsilon(1e-13));
  FeField shifted = xy;
  shift_mean_to_zero(*mesh, shifted);
  CHECK(std::abs(mean_value(*mesh, shifted, 0)) <= 1e-14);
}

TEST_CASE("point evaluation: bilinear fields are reproduced across meshes") {
  auto coarse = build_macro_mesh(1.0, 8);
  const FeField xy = nodal_scalar(coarse, [](const Vec2& p) { return 2.0 * p[0] * p[1] - p[1]; });
  for (const Vec2 x : {Vec2(0.123, 0.456), Vec2(0.0, 0.0), Vec2(1.0, 1.0), Vec2(0.999, 0.001)}) {
    CHECK(eval_scalar(*coarse, xy, x) == doctest::Approx(2.0 * x[0] * x[1] - x[1]).epsilon(1e-12));
    const Vec2 grad = eval_scalar_gradient(*coarse, xy, x);
    CHECK(grad[0] == doctest::Approx(2.0 * x[1]).epsilon(1e-10));
    CHECK(grad[1] == doctest::Approx(2.0 * x[0] - 1.0).epsilon(1e-10));
  }
}

TEST_CASE("gradient pairing: recovers the coefficient-weighted energy") {
  auto mesh = build_unit_cell_mesh(UnitCellGeometry::laminate(0.5), 8);
  const PhaseMatrix coeff{{Phase::Matrix, Mat2::Identity()}, {Phase::Inclusion, 4.0 * Mat2::Identity()}};
  const FeField x1 = nodal_scalar(mesh, [](const Vec2& p) { return p[0]; });
  CHECK(integrate_gradient_pairing(*mesh, coeff, x1, x1) == doctest::Approx(2.5).epsilon(1e-12));
}
