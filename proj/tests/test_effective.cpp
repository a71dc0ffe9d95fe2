#include <doctest.h>

#include <cmath>

#include "hichom/effective.hpp"
#include "hichom/errors.hpp"

using namespace hichom;

namespace {

PhaseCoefficients disk_defaults() {
  PhaseCoefficients c;
  c.a = {{Phase::Matrix, Mat2::Identity()}, {Phase::Inclusion, 10.0 * Mat2::Identity()}};
  c.B = {{Phase::Matrix, {1.0, 1.0}}, {Phase::Inclusion, {2.0, 2.0}}};
  c.R = {2.0, 2.0};
  c.C = {{Phase::Matrix, {0.3, 0.2}}, {Phase::Inclusion, {0.6, 0.4}}};
  return c;
}

}  // namespace

TEST_CASE("a_hom: constant anisotropic coefficient is reproduced exactly") {
  auto mesh = build_unit_cell_mesh(UnitCellGeometry::disk(0.25), 16);
  Mat2 a;
  a << 2.0, 0.0, 0.0, 3.0;
  const PhaseCoefficients coeffs = PhaseCoefficients::constant(a, {1, 1}, {1, 1}, {0, 0});
  const CorrectorSet set = solve_cell_problems(mesh, coeffs, SolverConfig{});
  Mat2 averaging;
  const Mat2 a_hom = assemble_a_hom(*mesh, set.chi, coeffs, &averaging);
  CHECK((a_hom - a).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((a_hom - averaging).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("a_hom: laminate equals the harmonic/arithmetic means exactly") {
  auto mesh = build_unit_cell_mesh(UnitCellGeometry::laminate(0.5), 64);
  const PeriodicDofMap map = build_periodic_map(*mesh);
  PhaseCoefficients coeffs;
  coeffs.a = {{Phase::Matrix, Mat2::Identity()}, {Phase::Inclusion, 4.0 * Mat2::Identity()}};
  const auto chi = solve_chi(mesh, map, coeffs, SolverConfig{});
  const Mat2 a_hom = assemble_a_hom(*mesh, chi, coeffs);
  CHECK(a_hom(0, 0) == doctest::Approx(1.6).epsilon(1e-10));
  CHECK(a_hom(1, 1) == doctest::Approx(2.5).epsilon(1e-10));
  CHECK(std::abs(a_hom(0, 1)) <= 1e-10);
}

TEST_CASE("a_hom: disk configuration sits inside the Reuss-Voigt interval with square symmetry") {
  auto mesh = build_unit_cell_mesh(UnitCellGeometry::disk(0.25), 64);
  const PeriodicDofMap map = build_periodic_map(*mesh);
  const PhaseCoefficients coeffs = disk_defaults();
  const auto chi = solve_chi(mesh, map, coeffs, SolverConfig{});
  const Mat2 a_hom = assemble_a_hom(*mesh, chi, coeffs);

  CHECK(std::abs(a_hom(0, 1)) < 1e-8);
  CHECK(a_hom(0, 0) == doctest::Approx(a_hom(1, 1)).epsilon(1e-6));
  CHECK(a_hom(0, 0) > 1.2146);
  CHECK(a_hom(0, 0) < 2.7672);
}

TEST_CASE("B_hom: constant isotropic tensor is reproduced entrywise") {
  auto mesh = build_unit_cell_mesh(UnitCellGeometry::disk(0.25), 16);
  const double lambda = 1.2, mu = 0.7;
  const PhaseCoefficients coeffs = PhaseCoefficients::constant(Mat2::Identity(), {lambda, mu}, {1, 1}, {0, 0});
  const CorrectorSet set = solve_cell_problems(mesh, coeffs, SolverConfig{});
  const Rank4 b_hom = assemble_B_hom(*mesh, set.V, coeffs);
  CHECK(b_hom(0, 0, 0, 0) == doctest::Approx(lambda + 2 * mu).epsilon(1e-12));
  CHECK(b_hom(0, 0, 1, 1) == doctest::Approx(lambda).epsilon(1e-12));
  CHECK(b_hom(0, 1, 0, 1) == doctest::Approx(mu).epsilon(1e-12));
}

TEST_CASE("B_hom: scaling the coefficient scales the tensor; bounds hold for the disk") {
  auto mesh = build_unit_cell_mesh(UnitCellGeometry::disk(0.25), 32);
  const PeriodicDofMap map = build_periodic_map(*mesh);
  const PhaseCoefficients coeffs = disk_defaults();
  const auto V = solve_V(mesh, map, coeffs, SolverConfig{});
  const Rank4 b_hom = assemble_B_hom(*mesh, V, coeffs);

  PhaseCoefficients doubled = coeffs;
  doubled.B = {{Phase::Matrix, {2.0, 2.0}}, {Phase::Inclusion, {4.0, 4.0}}};
  const auto V2 = solve_V(mesh, map, doubled, SolverConfig{});
  const Rank4 b_hom2 = assemble_B_hom(*mesh, V2, doubled);
  CHECK((b_hom2.voigt() - 2.0 * b_hom.voigt()).cwiseAbs().maxCoeff() <= 1e-10 * b_hom.max_abs());

  // Scalar Reuss-Voigt interval for the 1111 entry (stiffer inclusion).
  const double fraction = mesh->inclusion_fraction();
  const BoundInterval bounds = voigt_reuss_bounds(3.0, 6.0, fraction);
  CHECK(b_hom.voigt()(0, 0) > bounds.reuss);
  CHECK(b_hom.voigt()(0, 0) < bounds.voigt);

  // Square symmetry of the staircase disk.
  CHECK(b_hom(0, 0, 0, 0) == doctest::Approx(b_hom(1, 1, 1, 1)).epsilon(1e-6));
}

TEST_CASE("C_hom: zero electrostriction gives zero in both modes") {
  auto mesh = build_unit_cell_mesh(UnitCellGeometry::disk(0.25), 16);
  PhaseCoefficients coeffs = disk_defaults();
  coeffs.C = {{Phase::Matrix, {0.0, 0.0}}, {Phase::Inclusion, {0.0, 0.0}}};
  const CorrectorSet set = solve_cell_problems(mesh, coeffs, SolverConfig{});
  const Rank4 weak =
      assemble_C_hom(*mesh, set.chi, set.V, set.p, coeffs, CHomMode::WeakFormConsistent);
  const Rank4 verbatim = assemble_C_hom(*mesh, set.chi, set.V, set.p, coeffs, CHomMode::Eq31Verbatim);
  CHECK(weak.max_abs() <= 1e-12);
  CHECK(verbatim.max_abs() <= 1e-12);
}

TEST_CASE("C_hom: constant data reproduces C in weak mode and the printed contraction verbatim") {
  auto mesh = build_unit_cell_mesh(UnitCellGeometry::disk(0.25), 16);
  const double alpha = 0.4, beta = 0.3;
  const PhaseCoefficients coeffs =
      PhaseCoefficients::constant(2.0 * Mat2::Identity(), {1.0, 1.0}, {1.0, 1.0}, {alpha, beta});
  const CorrectorSet set = solve_cell_problems(mesh, coeffs, SolverConfig{});

  const Rank4 c_tensor = Rank4::isotropic(alpha, beta);
  const Rank4 weak = assemble_C_hom(*mesh, set.chi, set.V, set.p, coeffs, CHomMode::WeakFormConsistent);
  CHECK((weak.voigt() - c_tensor.voigt()).cwiseAbs().maxCoeff() <= 1e-12);

  // Verbatim: sum_ab (C : E^ij)_ab (C : E^mn)_ab, computed independently.
  const Rank4 verbatim = assemble_C_hom(*mesh, set.chi, set.V, set.p, coeffs, CHomMode::Eq31Verbatim);
  Eigen::Matrix3d expected;
  for (int vi = 0; vi < 3; ++vi)
    for (int vj = 0; vj < 3; ++vj)
      expected(vi, vj) =
          stress_dot(c_tensor.contract(canonical_strain(vi)), c_tensor.contract(canonical_strain(vj)));
  CHECK((verbatim.voigt() - expected).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((verbatim.voigt() - c_tensor.voigt()).cwiseAbs().maxCoeff() > 0.01);  // documented gap
}

TEST_CASE("R_hom and T_hom: whole-cell inclusion with constant coefficients") {
  std::vector<std::vector<bool>> all_true(4, std::vector<bool>(4, true));
  auto mesh = build_unit_cell_mesh(UnitCellGeometry::indicator(all_true), 16);
  PhaseCoefficients coeffs;
  coeffs.R = {1.5, 0.5};
  const CorrectorSet set = solve_cell_problems(mesh, coeffs, SolverConfig{});
  const Rank4 r_expected = Rank4::isotropic(1.5, 0.5);
  for (RTDomain domain : {RTDomain::InclusionOnly, RTDomain::FullCell}) {
    const Rank4 r_hom = assemble_R_hom(*mesh, set.W, coeffs, domain);
    CHECK((r_hom.voigt() - r_expected.voigt()).cwiseAbs().maxCoeff() <= 1e-12);
  }
  // V = 0 for the constant B, so T_hom = R over the full cell as well.
  const Rank4 t_hom = assemble_T_hom(*mesh, set.V, coeffs, RTDomain::FullCell);
  CHECK((t_hom.voigt() - r_expected.voigt()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("R_hom: full-cell minus inclusion-only equals the matrix-area multiple of R") {
  auto mesh = build_unit_cell_mesh(UnitCellGeometry::disk(0.25), 32);
  const PhaseCoefficients coeffs = disk_defaults();
  const CorrectorSet set = solve_cell_problems(mesh, coeffs, SolverConfig{});
  const Rank4 inclusion = assemble_R_hom(*mesh, set.W, coeffs, RTDomain::InclusionOnly);
  const Rank4 full = assemble_R_hom(*mesh, set.W, coeffs, RTDomain::FullCell);
  // D(W) = 0 exactly on matrix elements, so the difference is |Y_f| R.
  const double matrix_area = 1.0 - mesh->inclusion_fraction();
  const Eigen::Matrix3d expected = matrix_area * coeffs.R.tensor().voigt();
  CHECK((full.voigt() - inclusion.voigt() - expected).cwiseAbs().maxCoeff() <= 1e-12 * full.max_abs());
}

TEST_CASE("voigt_reuss_bounds: frozen oracle values and limit cases") {
  const BoundInterval b = voigt_reuss_bounds(1.0, 10.0, M_PI * 0.25 * 0.25);
  CHECK(b.reuss == doctest::Approx(1.2146455942537888).epsilon(1e-12));
  CHECK(b.voigt == doctest::Approx(2.767145867644259).epsilon(1e-12));

  const BoundInterval equal = voigt_reuss_bounds(3.0, 3.0, 0.4);
  CHECK(equal.reuss == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(equal.voigt == doctest::Approx(3.0).epsilon(1e-14));

  const BoundInterval none = voigt_reuss_bounds(2.0, 9.0, 0.0);
  CHECK(none.reuss == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(none.voigt == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("a_hom monotonicity: raising the inclusion coefficient does not lower the form") {
  auto mesh = build_unit_cell_mesh(UnitCellGeometry::disk(0.25), 32);
  const PeriodicDofMap map = build_periodic_map(*mesh);
  PhaseCoefficients low = disk_defaults();
  PhaseCoefficients high = disk_defaults();
  high.a[Phase::Inclusion] = 12.0 * Mat2::Identity();

  const Mat2 a_low = assemble_a_hom(*mesh, solve_chi(mesh, map, low, SolverConfig{}), low);
  const Mat2 a_high = assemble_a_hom(*mesh, solve_chi(mesh, map, high, SolverConfig{}), high);
  for (const Vec2& dir :
       {Vec2(1, 0), Vec2(0, 1), Vec2(M_SQRT1_2, M_SQRT1_2), Vec2(0.3, -0.95), Vec2(-0.8, 0.6)})
    CHECK(dir.dot((a_high - a_low) * dir) >= -1e-12);
}

TEST_CASE("effective tensors: symmetries and form agreement for the disk configuration") {
  auto mesh = build_unit_cell_mesh(UnitCellGeometry::disk(0.25), 32);
  const PhaseCoefficients coeffs = disk_defaults();
  const CorrectorSet set = solve_cell_problems(mesh, coeffs, SolverConfig{});
  const EffectiveTensors t = assemble_effective_tensors(*mesh, set, coeffs);

  CHECK((t.a_hom - t.a_hom_averaging).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK((t.b_hom.voigt() - t.b_hom_averaging.voigt()).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(t.b_hom.major_symmetry_defect() <= 1e-10 * (1.0 + t.b_hom.max_abs()));
  CHECK(t.r_hom_inclusion.major_symmetry_defect() <= 1e-10 * (1.0 + t.r_hom_inclusion.max_abs()));
  CHECK(t.t_hom_inclusion.major_symmetry_defect() <= 1e-10 * (1.0 + t.t_hom_inclusion.max_abs()));
  CHECK(t.b_hom.min_eigenvalue() > 0.0);
  CHECK(t.r_hom_inclusion.min_eigenvalue() >= 0.0);

  // Configured-mode accessors follow the enum switches.
  CHECK(&t.c_hom() == &t.c_hom_weak);
  CHECK(&t.r_hom() == &t.r_hom_inclusion);
}

TEST_CASE("missing correctors are rejected") {
  auto mesh = build_unit_cell_mesh(UnitCellGeometry::disk(0.25), 8);
  const PhaseCoefficients coeffs = disk_defaults();
  std::array<FeField, 2> no_chi;
  std::array<FeField, 3> no_v;
  CHECK_THROWS_AS(assemble_a_hom(*mesh, no_chi, coeffs), Error);
  CHECK_THROWS_AS(assemble_B_hom(*mesh, no_v, coeffs), Error);
  CHECK_THROWS_AS(assemble_R_hom(*mesh, no_v, coeffs, RTDomain::InclusionOnly), Error);
}
