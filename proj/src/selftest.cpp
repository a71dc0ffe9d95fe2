#include "hichom/selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>

#include "hichom/cell.hpp"
#include "hichom/config.hpp"
#include "hichom/io.hpp"
#include "hichom/verification.hpp"

namespace hichom {

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

PhaseCoefficients default_disk_coefficients() {
  PhaseCoefficients c;
  c.a = {{Phase::Matrix, Mat2::Identity()}, {Phase::Inclusion, 10.0 * Mat2::Identity()}};
  c.B = {{Phase::Matrix, {1.0, 1.0}}, {Phase::Inclusion, {2.0, 2.0}}};
  c.R = {2.0, 2.0};
  c.C = {{Phase::Matrix, {0.0, 0.0}}, {Phase::Inclusion, {0.0, 0.0}}};
  c.gamma = 1.0;
  return c;
}

StudySetup default_disk_study(int threads) {
  StudySetup s;
  s.geometry = UnitCellGeometry::disk(0.25);
  s.coeffs = default_disk_coefficients();
  s.cell_n = 64;
  s.macro_n = 64;
  s.epsilons = {0.5, 0.25, 0.125};
  s.cells_per_period = 8;
  s.f = ScalarData::constant(1.0).function();
  s.g = VectorData::constant(Vec2(0.0, -1.0)).function();
  s.h = ScalarData::linear(Vec2(1.0, 0.0)).function();
  s.threads = threads;
  return s;
}

struct Payload {
  std::vector<CriterionResult> criteria;  // ids 1..10
};

Payload run_payload(int threads) {
  Payload out;
  const SolverConfig cfg;
  double max_form_gap = 0.0;  // criterion 4 accumulator

  // 1. Trivial-limit exactness with spatially constant coefficients.
  {
    const double t0 = now_seconds();
    const PhaseCoefficients coeffs = PhaseCoefficients::constant(
        (Mat2() << 2.0, 0.0, 0.0, 3.0).finished(), {1.5, 1.0}, {2.0, 2.0}, {0.3, 0.2});
    MeshPtr mesh = build_unit_cell_mesh(UnitCellGeometry::disk(0.25), 64);
    const CorrectorSet correctors = solve_cell_problems(mesh, coeffs, cfg, threads);
    const EffectiveTensors tensors = assemble_effective_tensors(*mesh, correctors, coeffs);
    max_form_gap = std::max({max_form_gap, (tensors.a_hom - tensors.a_hom_averaging).cwiseAbs().maxCoeff(),
                             (tensors.b_hom.voigt() - tensors.b_hom_averaging.voigt()).cwiseAbs().maxCoeff()});

    const double a_gap = (tensors.a_hom - coeffs.a.at(Phase::Matrix)).cwiseAbs().maxCoeff();
    const double b_gap =
        (tensors.b_hom.voigt() - coeffs.B.at(Phase::Matrix).tensor().voigt()).cwiseAbs().maxCoeff();
    double corrector_h1 = 0.0;
    for (const auto& f : correctors.chi) corrector_h1 = std::max(corrector_h1, h1_seminorm(*mesh, f));
    for (const auto* family : {&correctors.V, &correctors.p, &correctors.W})
      for (const auto& f : *family) corrector_h1 = std::max(corrector_h1, h1_seminorm(*mesh, f));
    const double seconds = now_seconds() - t0;

    CriterionResult c;
    c.id = 1;
    c.name = "trivial-limit exactness (constant coefficients)";
    c.pass = a_gap <= 1e-10 && b_gap <= 1e-10 && corrector_h1 <= 1e-10 && seconds < 5.0;
    c.details = "max|aHom-a|=" + fmt(a_gap) + ", max|BHom-B|=" + fmt(b_gap) +
                ", max corrector |.|_H1=" + fmt(corrector_h1) + ", limit 1e-10";
    c.seconds = seconds;
    out.criteria.push_back(c);
  }

  // 2. Laminate oracle: a_hom = diag(1.6, 2.5).
  {
    const double t0 = now_seconds();
    PhaseCoefficients coeffs = default_disk_coefficients();
    coeffs.a = {{Phase::Matrix, Mat2::Identity()}, {Phase::Inclusion, 4.0 * Mat2::Identity()}};
    MeshPtr mesh = build_unit_cell_mesh(UnitCellGeometry::laminate(0.5), 64);
    const PeriodicDofMap map = build_periodic_map(*mesh);
    const auto chi = solve_chi(mesh, map, coeffs, cfg);
    Mat2 averaging;
    const Mat2 a_hom = assemble_a_hom(*mesh, chi, coeffs, &averaging);
    max_form_gap = std::max(max_form_gap, (a_hom - averaging).cwiseAbs().maxCoeff());
    Mat2 exact;
    exact << 1.6, 0.0, 0.0, 2.5;
    const double gap = (a_hom - exact).cwiseAbs().maxCoeff();
    const double seconds = now_seconds() - t0;

    CriterionResult c;
    c.id = 2;
    c.name = "laminate oracle aHom = diag(1.6, 2.5)";
    c.pass = gap <= 1e-8 && seconds < 5.0;
    c.details = "max deviation " + fmt(gap) + ", limit 1e-8";
    c.seconds = seconds;
    out.criteria.push_back(c);
  }

  // 3 + 5. Disk configuration: Reuss-Voigt bounds, symmetry, ellipticity.
  {
    const double t0 = now_seconds();
    const PhaseCoefficients coeffs = default_disk_coefficients();
    MeshPtr mesh = build_unit_cell_mesh(UnitCellGeometry::disk(0.25), 64);
    const CorrectorSet correctors = solve_cell_problems(mesh, coeffs, cfg, threads);
    const EffectiveTensors tensors = assemble_effective_tensors(*mesh, correctors, coeffs);
    max_form_gap = std::max({max_form_gap, (tensors.a_hom - tensors.a_hom_averaging).cwiseAbs().maxCoeff(),
                             (tensors.b_hom.voigt() - tensors.b_hom_averaging.voigt()).cwiseAbs().maxCoeff()});
    const double seconds = now_seconds() - t0;

    const double a_lo = 1.2146, a_hi = 2.7672;
    bool pass = true;
    std::string details;
    for (int i = 0; i < 2; ++i)
      pass = pass && tensors.a_hom(i, i) > a_lo && tensors.a_hom(i, i) < a_hi;
    pass = pass && std::abs(tensors.a_hom(0, 1)) < 1e-8;
    details = "aHom diag = (" + fmt(tensors.a_hom(0, 0)) + ", " + fmt(tensors.a_hom(1, 1)) +
              ") in (1.2146, 2.7672), |a12| = " + fmt(std::abs(tensors.a_hom(0, 1)));

    const double fraction = UnitCellGeometry::disk(0.25).inclusion_area();
    const double b_entries_f[3] = {3.0, 3.0, 1.0};  // lambda + 2 mu, lambda + 2 mu, mu
    const double b_entries_s[3] = {6.0, 6.0, 2.0};
    for (int v = 0; v < 3; ++v) {
      const BoundInterval bounds = voigt_reuss_bounds(b_entries_f[v], b_entries_s[v], fraction);
      const double value = tensors.b_hom.voigt()(v, v);
      pass = pass && value > bounds.reuss && value < bounds.voigt;
    }
    details += "; BHom Voigt diag = (" + fmt(tensors.b_hom.voigt()(0, 0)) + ", " +
               fmt(tensors.b_hom.voigt()(1, 1)) + ", " + fmt(tensors.b_hom.voigt()(2, 2)) + ")";

    CriterionResult c3;
    c3.id = 3;
    c3.name = "Reuss-Voigt bounds for the disk configuration";
    c3.pass = pass && seconds < 10.0;
    c3.details = details;
    c3.seconds = seconds;
    out.criteria.push_back(c3);

    const double b_sym = tensors.b_hom.major_symmetry_defect();
    const double r_sym = tensors.r_hom_inclusion.major_symmetry_defect();
    const double t_sym = tensors.t_hom_inclusion.major_symmetry_defect();
    const double b_eig = tensors.b_hom.min_eigenvalue();
    CriterionResult c5;
    c5.id = 5;
    c5.name = "major symmetry and ellipticity of BHom, RHom, THom";
    c5.pass = b_sym <= 1e-10 && r_sym <= 1e-10 && t_sym <= 1e-10 && b_eig > 0.0;
    c5.details = "symmetry defects B=" + fmt(b_sym) + ", R=" + fmt(r_sym) + ", T=" + fmt(t_sym) +
                 "; min BHom Voigt eigenvalue " + fmt(b_eig);
    c5.seconds = 0.0;
    out.criteria.push_back(c5);
  }

  // 4. Energy-form vs averaging-form oracle equivalence (all configurations above).
  {
    CriterionResult c;
    c.id = 4;
    c.name = "energy form vs averaging form agreement for aHom and BHom";
    c.pass = max_form_gap <= 1e-8;
    c.details = "max |energy - averaging| = " + fmt(max_form_gap) + ", limit 1e-8";
    c.seconds = 0.0;
    out.criteria.push_back(c);
  }

  // Reorder so criteria print by id.
  std::sort(out.criteria.begin(), out.criteria.end(),
            [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });

  // 6. Manufactured-solution convergence, scalar and vector.
  {
    const double t0 = now_seconds();
    EffectiveTensors identity_tensors;
    identity_tensors.a_hom = Mat2::Identity();
    identity_tensors.b_hom = Rank4::isotropic(1.0, 1.0);
    identity_tensors.r_hom_inclusion = identity_tensors.r_hom_full = Rank4::isotropic(1.0, 1.0);

    std::vector<double> scalar_errors, vector_errors;
    for (int n : {16, 32, 64}) {
      MacroProblem problem;
      problem.mesh = build_macro_mesh(1.0, n);
      problem.tensors = identity_tensors;
      problem.f = [](const Vec2& x) {
        return 2.0 * M_PI * M_PI * std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]);
      };
      problem.g = [](const Vec2& x) {
        const double s = std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]);
        const double cc = std::cos(M_PI * x[0]) * std::cos(M_PI * x[1]);
        return Vec2(4.0 * M_PI * M_PI * s, -2.0 * M_PI * M_PI * cc);
      };
      problem.h = [](const Vec2&) { return 0.0; };

      const FeField phi = solve_phi0(problem, cfg);
      scalar_errors.push_back(l2_error(*problem.mesh, phi, [](const Vec2& x) {
        return std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]);
      }));
      const FeField v = solve_v0(problem, phi, cfg);  // cHom = 0: pure manufactured load
      vector_errors.push_back(l2_error_vector(*problem.mesh, v, [](const Vec2& x) {
        return Vec2(std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]), 0.0);
      }));
    }
    const double seconds = now_seconds() - t0;

    bool pass = scalar_errors[0] < 0.01 && seconds < 30.0;
    std::string details = "scalar ratios (";
    for (int i = 0; i < 2; ++i) {
      const double r = scalar_errors[i] / scalar_errors[i + 1];
      pass = pass && r >= 3.0 && r <= 5.0;
      details += (i ? ", " : "") + fmt(r);
    }
    details += "), vector ratios (";
    for (int i = 0; i < 2; ++i) {
      const double r = vector_errors[i] / vector_errors[i + 1];
      pass = pass && r >= 3.0 && r <= 5.0;
      details += (i ? ", " : "") + fmt(r);
    }
    details += "), required [3, 5]";

    CriterionResult c;
    c.id = 6;
    c.name = "manufactured-solution convergence order";
    c.pass = pass;
    c.details = details;
    c.seconds = seconds;
    out.criteria.push_back(c);
  }

  // 7-10. The epsilon ladder: one study feeds the four ladder criteria.
  {
    const double t0 = now_seconds();
    const ConvergenceReport report = run_convergence_study(default_disk_study(threads));
    const double seconds = now_seconds() - t0;

    auto seq = [](const std::vector<double>& v) {
      std::string s = "(";
      for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
      return s + ")";
    };

    CriterionResult c7;
    c7.id = 7;
    c7.name = "homogenization convergence, electrostatics";
    c7.pass = report.phi_monotone && report.corrector_improves && seconds < 120.0;
    c7.details = "phi L2 errors " + seq(report.phi_l2_errors) + " strictly decreasing; corrector residuals " +
                 seq(report.corrector_residuals) + " < uncorrected " + seq(report.uncorrected_grad_errors);
    c7.seconds = seconds;
    out.criteria.push_back(c7);

    CriterionResult c8;
    c8.id = 8;
    c8.name = "homogenization convergence, high-contrast elasticity";
    c8.pass = report.u_monotone && seconds < 300.0;
    c8.details = "u L2 errors " + seq(report.u_l2_errors) + " strictly decreasing (u0 = v0 + w0)";
    c8.seconds = seconds;
    out.criteria.push_back(c8);

    CriterionResult c9;
    c9.id = 9;
    c9.name = "uniform a-priori bound monitor";
    c9.pass = report.bound_monitor_ratio < 2.0 && report.w_monitor_ratio < 2.0;
    c9.details = "max/min (|u|_H1 + |phi|_H1) = " + fmt(report.bound_monitor_ratio) +
                 ", max/min |eps^gamma w|_H1 = " + fmt(report.w_monitor_ratio) + ", limit 2";
    c9.seconds = 0.0;
    out.criteria.push_back(c9);

    double max_split = 0.0;
    for (double r : report.splitting_residuals) max_split = std::max(max_split, r);
    CriterionResult c10;
    c10.id = 10;
    c10.name = "splitting identity u = v + eps^gamma w";
    c10.pass = !report.splitting_residuals.empty() && max_split <= 1e-12;
    c10.details = "max nodewise relative residual " + fmt(max_split) + ", limit 1e-12";
    c10.seconds = 0.0;
    out.criteria.push_back(c10);
  }

  return out;
}

Json render_criteria(const std::vector<CriterionResult>& criteria) {
  Json arr = Json::array();
  for (const CriterionResult& c : criteria)
    arr.push_back(Json{{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"details", c.details}});
  return arr;
}

}  // namespace

SelftestReport run_selftest(int threads) {
  const double t0 = now_seconds();
  Payload first = run_payload(threads);
  Payload second = run_payload(threads);
  const double seconds = now_seconds() - t0;

  const std::string render1 = render_criteria(first.criteria).dump(2);
  const std::string render2 = render_criteria(second.criteria).dump(2);

  CriterionResult c11;
  c11.id = 11;
  c11.name = "determinism of consecutive runs";
  c11.pass = render1 == render2;
  c11.details = c11.pass ? "two consecutive runs produced byte-identical reports"
                         : "consecutive runs disagree";
  c11.seconds = seconds;

  SelftestReport report;
  report.criteria = first.criteria;
  report.criteria.push_back(c11);
  report.all_pass = true;
  for (const CriterionResult& c : report.criteria) report.all_pass = report.all_pass && c.pass;

  RunConfig echo_config;
  echo_config.command = Command::Selftest;
  Json j;
  j["formatVersion"] = kReportFormatVersion;
  j["configEcho"] = config_to_json(echo_config);
  j["criteria"] = render_criteria(report.criteria);
  j["allPass"] = report.all_pass;
  report.report_json = j.dump(2) + "\n";
  return report;
}

}  // namespace hichom
