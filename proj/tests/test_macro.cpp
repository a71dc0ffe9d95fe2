#include <doctest.h>

#include <cmath>

#include "hichom/errors.hpp"
#include "hichom/macro.hpp"

using namespace hichom;

namespace {

EffectiveTensors simple_tensors(const Mat2& a, const Rank4& b, const Rank4& c, const Rank4& r,
                                const Rank4& t) {
  EffectiveTensors out;
  out.a_hom = out.a_hom_averaging = a;
  out.b_hom = out.b_hom_averaging = b;
  out.c_hom_weak = out.c_hom_verbatim = c;
  out.r_hom_inclusion = out.r_hom_full = r;
  out.t_hom_inclusion = out.t_hom_full = t;
  return out;
}

MacroProblem zero_data_problem(MeshPtr mesh, const EffectiveTensors& tensors) {
  MacroProblem p;
  p.mesh = std::move(mesh);
  p.tensors = tensors;
  p.f = [](const Vec2&) { return 0.0; };
  p.g = [](const Vec2&) { return Vec2::Zero().eval(); };
  p.h = [](const Vec2&) { return 0.0; };
  return p;
}

}  // namespace

TEST_CASE("phi0: linear boundary data with a constant tensor is exact") {
  const EffectiveTensors identity = simple_tensors(Mat2::Identity(), Rank4::isotropic(1, 1),
                                                   Rank4::zero(), Rank4::isotropic(1, 1), Rank4::zero());
  for (const Mat2& a : {Mat2(Mat2::Identity()), Mat2((Mat2() << 2, 0, 0, 1).finished())}) {
    MacroProblem p = zero_data_problem(build_macro_mesh(1.0, 16), identity);
    p.tensors.a_hom = a;
    p.h = [](const Vec2& x) { return x[0]; };
    const FeField phi = solve_phi0(p, SolverConfig{});
    for (int v = 0; v < p.mesh->node_count(); ++v)
      CHECK(phi(v, 0) == doctest::Approx(p.mesh->nodes[v][0]).epsilon(1e-12));
  }
}

TEST_CASE("phi0: manufactured source converges at second order") {
  const EffectiveTensors identity = simple_tensors(Mat2::Identity(), Rank4::isotropic(1, 1),
                                                   Rank4::zero(), Rank4::isotropic(1, 1), Rank4::zero());
  std::vector<double> errors;
  for (int n : {16, 32}) {
    MacroProblem p = zero_data_problem(build_macro_mesh(1.0, n), identity);
    p.f = [](const Vec2& x) { return 2.0 * M_PI * M_PI * std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]); };
    const FeField phi = solve_phi0(p, SolverConfig{});
    errors.push_back(
        l2_error(*p.mesh, phi, [](const Vec2& x) { return std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]); }));
  }
  CHECK(errors[0] < 0.01);
  CHECK(errors[0] / errors[1] == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("v0: zero data and constant electrostriction stress both give zero") {
  const Rank4 b = Rank4::isotropic(1.0, 1.0);
  const Rank4 c = Rank4::isotropic(0.5, 0.25);

  // g = 0, C_hom = 0.
  MacroProblem p0 =
      zero_data_problem(build_macro_mesh(1.0, 16),
                        simple_tensors(Mat2::Identity(), b, Rank4::zero(), b, Rank4::zero()));
  const FeField phi0 = solve_phi0(p0, SolverConfig{});
  CHECK(l2_norm(*p0.mesh, solve_v0(p0, phi0, SolverConfig{})) <= 1e-12);

  // h = x0, f = 0, a = I: grad phi0 = e1 everywhere, constant stress, v0 = 0.
  MacroProblem p1 = zero_data_problem(build_macro_mesh(1.0, 16),
                                      simple_tensors(Mat2::Identity(), b, c, b, Rank4::zero()));
  p1.h = [](const Vec2& x) { return x[0]; };
  const FeField phi1 = solve_phi0(p1, SolverConfig{});
  const FeField v1 = solve_v0(p1, phi1, SolverConfig{});
  CHECK(l2_norm(*p1.mesh, v1) <= 1e-12);
}

TEST_CASE("v0: manufactured body force converges at second order") {
  const double lambda = 1.0, mu = 1.0;
  const EffectiveTensors tensors =
      simple_tensors(Mat2::Identity(), Rank4::isotropic(lambda, mu), Rank4::zero(),
                     Rank4::isotropic(1, 1), Rank4::zero());
  std::vector<double> errors;
  for (int n : {16, 32}) {
    MacroProblem p = zero_data_problem(build_macro_mesh(1.0, n), tensors);
    p.g = [&](const Vec2& x) {
      const double s = std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]);
      const double cc = std::cos(M_PI * x[0]) * std::cos(M_PI * x[1]);
      return Vec2((lambda + 3 * mu) * M_PI * M_PI * s, -(lambda + mu) * M_PI * M_PI * cc);
    };
    const FeField phi = solve_phi0(p, SolverConfig{});
    const FeField v = solve_v0(p, phi, SolverConfig{});
    errors.push_back(l2_error_vector(
        *p.mesh, v, [](const Vec2& x) { return Vec2(std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]), 0.0); }));
  }
  CHECK(errors[0] / errors[1] == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("v0: linearity in g and quadratic scaling of the electrostriction load") {
  const Rank4 b = Rank4::isotropic(1.0, 1.0);
  const Rank4 c = Rank4::isotropic(0.5, 0.25);
  MacroProblem p = zero_data_problem(build_macro_mesh(1.0, 16),
                                     simple_tensors(Mat2::Identity(), b, Rank4::zero(), b, Rank4::zero()));
  p.g = [](const Vec2&) { return Vec2(0.3, -1.0); };
  const FeField phi = solve_phi0(p, SolverConfig{});
  const FeField v1 = solve_v0(p, phi, SolverConfig{});
  MacroProblem p2 = p;
  p2.g = [](const Vec2&) { return Vec2(0.6, -2.0); };
  const FeField v2 = solve_v0(p2, phi, SolverConfig{});
  CHECK((v2.values - 2.0 * v1.values).cwiseAbs().maxCoeff() <= 1e-12 * v1.values.cwiseAbs().maxCoeff());

  // Doubling h quadruples the assembled electrostriction load (f = 0).
  MacroProblem pc = zero_data_problem(build_macro_mesh(1.0, 16),
                                      simple_tensors(Mat2::Identity(), b, c, b, Rank4::zero()));
  pc.h = [](const Vec2& x) { return x[0] + 0.5 * x[1]; };
  MacroProblem pc2 = pc;
  pc2.h = [](const Vec2& x) { return 2.0 * (x[0] + 0.5 * x[1]); };
  const Eigen::VectorXd load1 = electrostriction_load(pc, solve_phi0(pc, SolverConfig{}));
  const Eigen::VectorXd load2 = electrostriction_load(pc2, solve_phi0(pc2, SolverConfig{}));
  CHECK((load2 - 4.0 * load1).cwiseAbs().maxCoeff() <= 1e-10 * load1.cwiseAbs().maxCoeff());
}

TEST_CASE("w0: zero sources give zero; the energy identity holds for constant-strain v0") {
  const Rank4 r = Rank4::isotropic(1.0, 1.0);
  MacroProblem p = zero_data_problem(build_macro_mesh(1.0, 16),
                                     simple_tensors(Mat2::Identity(), r, Rank4::zero(), r, r));

  FeField zero_v = make_field(p.mesh, 2);
  CHECK(l2_norm(*p.mesh, solve_w0(p, zero_v, SolverConfig{})) <= 1e-12);

  // T_hom = 0: any v0 yields w0 = 0.
  MacroProblem pt = zero_data_problem(p.mesh, simple_tensors(Mat2::Identity(), r, Rank4::zero(), r,
                                                             Rank4::zero()));
  FeField linear_v = make_field(p.mesh, 2);
  for (int v = 0; v < p.mesh->node_count(); ++v) {
    const Vec2 x = p.mesh->nodes[v];
    linear_v.at(v, 0) = 0.1 * x[0] + 0.05 * x[1];
    linear_v.at(v, 1) = -0.02 * x[0] + 0.07 * x[1];
  }
  CHECK(l2_norm(*pt.mesh, solve_w0(pt, linear_v, SolverConfig{})) <= 1e-12);

  // T_hom = R_hom, constant-strain v0: check int R : D(w0) : D(w0) = -int T : D(v0) : D(w0).
  const FeField w0 = solve_w0(p, linear_v, SolverConfig{});
  const PhaseTensor r_coeff{{Phase::Matrix, r}, {Phase::Inclusion, r}};
  const SparseOperator op = assemble_elasticity_operator(*p.mesh, r_coeff);
  const double lhs = w0.values.dot(op.matrix * w0.values);
  const auto t_stress = [&](int, const Vec2& x) -> Eigen::Vector3d {
    const Mat2 grad = eval_vector_gradient(*p.mesh, linear_v, x);
    return r.contract(strain_to_voigt(0.5 * (grad + grad.transpose())));
  };
  const double rhs = -assemble_stress_load(*p.mesh, t_stress).dot(w0.values);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("w0: degenerate R_hom is reported") {
  MacroProblem p = zero_data_problem(
      build_macro_mesh(1.0, 8), simple_tensors(Mat2::Identity(), Rank4::isotropic(1, 1), Rank4::zero(),
                                               Rank4::zero(), Rank4::isotropic(1, 1)));
  FeField v = make_field(p.mesh, 2);
  CHECK_THROWS_AS(solve_w0(p, v, SolverConfig{}), Error);
  try {
    solve_w0(p, v, SolverConfig{});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateRHom);
  }
}

TEST_CASE("compose_u0: nodewise sum with mesh checks") {
  auto mesh = build_macro_mesh(1.0, 8);
  FeField v = make_field(mesh, 2), w = make_field(mesh, 2);
  for (int i = 0; i < v.values.size(); ++i) {
    v.values[i] = 0.01 * i;
    w.values[i] = -0.01 * i;
  }
  const FeField u = compose_u0(v, w);
  CHECK(u.values.cwiseAbs().maxCoeff() <= 1e-15);

  FeField zero = make_field(mesh, 2);
  CHECK((compose_u0(v, zero).values - v.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK((compose_u0(zero, w).values - w.values).cwiseAbs().maxCoeff() == 0.0);

  FeField other = make_field(build_macro_mesh(1.0, 4), 2);
  CHECK_THROWS_AS(compose_u0(v, other), Error);
}

TEST_CASE("solve_macro: phi0 is independent of the elastic solves") {
  const EffectiveTensors tensors =
      simple_tensors(Mat2::Identity(), Rank4::isotropic(1, 1), Rank4::isotropic(0.3, 0.2),
                     Rank4::isotropic(1, 1), Rank4::isotropic(0.5, 0.5));
  MacroProblem p = zero_data_problem(build_macro_mesh(1.0, 16), tensors);
  p.f = [](const Vec2&) { return 1.0; };
  p.g = [](const Vec2&) { return Vec2(0.0, -1.0); };
  p.h = [](const Vec2& x) { return x[0]; };

  const MacroSolution sol = solve_macro(p, SolverConfig{});
  CHECK(sol.w0_solved);
  CHECK((sol.u0.values - sol.v0.values - sol.w0.values).cwiseAbs().maxCoeff() == 0.0);
  const FeField phi_again = solve_phi0(p, SolverConfig{});
  CHECK((phi_again.values - sol.phi0.values).cwiseAbs().maxCoeff() == 0.0);

  // Boundary conditions exact at constrained nodes.
  for (int v = 0; v < p.mesh->node_count(); ++v)
    if (p.mesh->is_boundary_node(v)) {
      CHECK(sol.phi0(v, 0) == p.mesh->nodes[v][0]);
      CHECK(sol.v0(v, 0) == 0.0);
      CHECK(sol.v0(v, 1) == 0.0);
      CHECK(sol.w0(v, 0) == 0.0);
      CHECK(sol.w0(v, 1) == 0.0);
    }
}
