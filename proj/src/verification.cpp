#include "hichom/verification.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "hichom/cell.hpp"
#include "hichom/errors.hpp"

namespace hichom {

namespace {

template <class PerPoint>
double quadrature_l2(const StructuredMesh& fine_mesh, PerPoint&& f) {
  double sq = 0.0;
  for (int e = 0; e < fine_mesh.element_count(); ++e)
    for (const GaussPoint& q : element_quadrature(fine_mesh, e)) sq += q.w * f(e, q);
  return std::sqrt(sq);
}

}  // namespace

double l2_difference_scalar(const StructuredMesh& fine_mesh, const FeField& fine,
                            const StructuredMesh& other_mesh, const FeField& other) {
  return quadrature_l2(fine_mesh, [&](int e, const GaussPoint& q) {
    double v = 0.0;
    for (int a = 0; a < 4; ++a) v += q.shape[a] * fine(fine_mesh.elements[e][a], 0);
    const double d = v - eval_scalar(other_mesh, other, q.x);
    return d * d;
  });
}

double l2_difference_vector(const StructuredMesh& fine_mesh, const FeField& fine,
                            const StructuredMesh& other_mesh, const FeField& other) {
  return quadrature_l2(fine_mesh, [&](int e, const GaussPoint& q) {
    Vec2 v = Vec2::Zero();
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 2; ++c) v[c] += q.shape[a] * fine(fine_mesh.elements[e][a], c);
    return (v - eval_vector(other_mesh, other, q.x)).squaredNorm();
  });
}

double h1_distance_vector(const StructuredMesh& fine_mesh, const FeField& fine,
                          const StructuredMesh& other_mesh, const FeField& other) {
  const double l2 = l2_difference_vector(fine_mesh, fine, other_mesh, other);
  const double semi = quadrature_l2(fine_mesh, [&](int e, const GaussPoint& q) {
    Mat2 g = Mat2::Zero();
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 2; ++c) g.row(c) += q.dshape.row(a) * fine(fine_mesh.elements[e][a], c);
    return (g - eval_vector_gradient(other_mesh, other, q.x)).squaredNorm();
  });
  return std::sqrt(l2 * l2 + semi * semi);
}

namespace {

Vec2 unit_cell_fraction(const Vec2& x, double epsilon) {
  Vec2 y = x / epsilon;
  y[0] -= std::floor(y[0]);
  y[1] -= std::floor(y[1]);
  return y;
}

}  // namespace

CorrectorResidual corrector_residual(const StructuredMesh& fine_mesh, const FeField& phi_eps,
                                     const StructuredMesh& macro_mesh, const FeField& phi0,
                                     const StructuredMesh& cell_mesh, const std::array<FeField, 2>& chi,
                                     double epsilon) {
  if (!chi[0].mesh || !chi[1].mesh)
    throw Error(ErrorCode::MissingChi, "corrector residual requires solved chi correctors");
  if (phi_eps.values.size() != fine_mesh.node_count())
    throw Error(ErrorCode::MeshMismatch, "phi_eps does not match the fine mesh");

  double corrected_sq = 0.0, uncorrected_sq = 0.0;
  for (int e = 0; e < fine_mesh.element_count(); ++e)
    for (const GaussPoint& q : element_quadrature(fine_mesh, e)) {
      Vec2 grad_eps = Vec2::Zero();
      for (int a = 0; a < 4; ++a)
        grad_eps += q.dshape.row(a).transpose() * phi_eps(fine_mesh.elements[e][a], 0);
      const Vec2 grad0 = eval_scalar_gradient(macro_mesh, phi0, q.x);
      const Vec2 y = unit_cell_fraction(q.x, epsilon);
      Vec2 corrected = grad0;
      for (int i = 0; i < 2; ++i) corrected += grad0[i] * eval_scalar_gradient(cell_mesh, chi[i], y);
      corrected_sq += q.w * (grad_eps - corrected).squaredNorm();
      uncorrected_sq += q.w * (grad_eps - grad0).squaredNorm();
    }
  return {std::sqrt(corrected_sq), std::sqrt(uncorrected_sq)};
}

std::map<std::string, double> tensor_cross_check(const EffectiveTensors& t) {
  std::map<std::string, double> out;
  out["aHom.energyVsAveraging"] = (t.a_hom - t.a_hom_averaging).cwiseAbs().maxCoeff();
  out["bHom.energyVsAveraging"] = (t.b_hom.voigt() - t.b_hom_averaging.voigt()).cwiseAbs().maxCoeff();
  out["cHom.verbatimVsWeakForm"] = (t.c_hom_verbatim.voigt() - t.c_hom_weak.voigt()).cwiseAbs().maxCoeff();
  out["rHom.fullCellVsInclusionOnly"] =
      (t.r_hom_full.voigt() - t.r_hom_inclusion.voigt()).cwiseAbs().maxCoeff();
  out["tHom.fullCellVsInclusionOnly"] =
      (t.t_hom_full.voigt() - t.t_hom_inclusion.voigt()).cwiseAbs().maxCoeff();
  return out;
}

std::map<std::string, double> tensor_cross_check(const StructuredMesh& mesh, const CorrectorSet& correctors,
                                                 const PhaseCoefficients& coeffs) {
  return tensor_cross_check(assemble_effective_tensors(mesh, correctors, coeffs));
}

namespace {

struct LadderEntry {
  DnsSolution sol;
  MeshPtr mesh;
};

bool strictly_decreasing(const std::vector<double>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return !v.empty();
}

double max_min_ratio(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return (*lo > 0.0) ? *hi / *lo : std::numeric_limits<double>::infinity();
}

}  // namespace

ConvergenceReport run_convergence_study(const StudySetup& setup) {
  setup.coeffs.validate();
  setup.geometry.validate();
  if (setup.epsilons.empty())
    throw Error(ErrorCode::ValidationError, "epsilon ladder must not be empty");

  // Cell problems and effective tensors, once.
  MeshPtr cell_mesh = build_unit_cell_mesh(setup.geometry, setup.cell_n);
  const CorrectorSet correctors = solve_cell_problems(cell_mesh, setup.coeffs, setup.solver, setup.threads);
  ConvergenceReport report;
  report.tensors =
      assemble_effective_tensors(*cell_mesh, correctors, setup.coeffs, setup.c_mode, setup.rt_domain);
  report.tensor_cross_checks = tensor_cross_check(report.tensors);

  // Homogenized reference on a mesh at least as fine as the finest DNS mesh.
  int finest = setup.macro_n;
  for (double eps : setup.epsilons) {
    DnsProblem probe;
    probe.epsilon = eps;
    probe.cells_per_period = setup.cells_per_period;
    probe.geometry = setup.geometry;
    probe.coeffs = setup.coeffs;
    probe.edge_length = setup.edge_length;
    probe.validate();
    finest = std::max(finest, probe.fine_n());
  }
  MacroProblem macro;
  macro.mesh = build_macro_mesh(setup.edge_length, finest);
  macro.tensors = report.tensors;
  macro.f = setup.f;
  macro.g = setup.g;
  macro.h = setup.h;
  const FeField phi0 = solve_phi0(macro, setup.solver);
  FeField u0;
  if (setup.with_elasticity) {
    const FeField v0 = solve_v0(macro, phi0, setup.solver);
    const FeField w0 = solve_w0(macro, v0, setup.solver);
    u0 = compose_u0(v0, w0);
  }

  // One DNS per epsilon; entries are independent.
  const auto run_entry = [&](double eps) {
    DnsProblem problem;
    problem.epsilon = eps;
    problem.cells_per_period = setup.cells_per_period;
    problem.geometry = setup.geometry;
    problem.coeffs = setup.coeffs;
    problem.f = setup.f;
    problem.g = setup.g;
    problem.h = setup.h;
    problem.edge_length = setup.edge_length;
    LadderEntry entry;
    entry.mesh = build_dns_mesh(problem);
    if (setup.with_elasticity) {
      entry.sol = solve_dns(problem, entry.mesh, setup.solver);
    } else {
      entry.sol.epsilon = eps;
      entry.sol.gamma = setup.coeffs.gamma;
      entry.sol.phi = solve_phi_eps(problem, entry.mesh, setup.solver);
    }
    return entry;
  };

  std::vector<LadderEntry> entries(setup.epsilons.size());
  if (setup.threads > 1) {
    std::vector<std::future<LadderEntry>> futures;
    futures.reserve(setup.epsilons.size());
    for (double eps : setup.epsilons)
      futures.push_back(std::async(std::launch::async, run_entry, eps));
    for (size_t i = 0; i < futures.size(); ++i) entries[i] = futures[i].get();
  } else {
    for (size_t i = 0; i < setup.epsilons.size(); ++i) entries[i] = run_entry(setup.epsilons[i]);
  }

  if (setup.on_entry)
    for (size_t i = 0; i < entries.size(); ++i) setup.on_entry(i, *entries[i].mesh, entries[i].sol);

  for (size_t i = 0; i < entries.size(); ++i) {
    const LadderEntry& entry = entries[i];
    const double eps = setup.epsilons[i];
    report.epsilons.push_back(eps);
    report.phi_l2_errors.push_back(l2_difference_scalar(*entry.mesh, entry.sol.phi, *macro.mesh, phi0));
    const CorrectorResidual res =
        corrector_residual(*entry.mesh, entry.sol.phi, *macro.mesh, phi0, *cell_mesh, correctors.chi, eps);
    report.corrector_residuals.push_back(res.corrected);
    report.uncorrected_grad_errors.push_back(res.uncorrected);
    report.phi_h1_norms.push_back(h1_norm(*entry.mesh, entry.sol.phi));
    if (setup.with_elasticity) {
      report.u_l2_errors.push_back(l2_difference_vector(*entry.mesh, entry.sol.u, *macro.mesh, u0));
      report.u_h1_distances.push_back(h1_distance_vector(*entry.mesh, entry.sol.u, *macro.mesh, u0));
      report.u_h1_norms.push_back(h1_norm(*entry.mesh, entry.sol.u));
      FeField scaled_w = entry.sol.w;
      scaled_w.values *= std::pow(eps, entry.sol.gamma);
      report.w_scaled_h1_norms.push_back(h1_norm(*entry.mesh, scaled_w));
      report.splitting_residuals.push_back(splitting_residual(entry.sol));
    }
  }

  report.phi_monotone = strictly_decreasing(report.phi_l2_errors);
  report.u_monotone = setup.with_elasticity && strictly_decreasing(report.u_l2_errors);
  report.corrector_improves = true;
  for (size_t i = 0; i < report.corrector_residuals.size(); ++i)
    report.corrector_improves =
        report.corrector_improves && report.corrector_residuals[i] < report.uncorrected_grad_errors[i];
  if (setup.with_elasticity) {
    std::vector<double> monitor(entries.size());
    for (size_t i = 0; i < entries.size(); ++i)
      monitor[i] = report.phi_h1_norms[i] + report.u_h1_norms[i];
    report.bound_monitor_ratio = max_min_ratio(monitor);
    report.w_monitor_ratio = max_min_ratio(report.w_scaled_h1_norms);
  } else {
    report.bound_monitor_ratio = max_min_ratio(report.phi_h1_norms);
  }

  for (const auto* seq :
       {&report.phi_l2_errors, &report.u_l2_errors, &report.corrector_residuals, &report.phi_h1_norms,
        &report.u_h1_norms, &report.w_scaled_h1_norms})
    for (double v : *seq)
      if (!std::isfinite(v) || v < 0.0)
        throw Error(ErrorCode::ValidationError, "convergence report contains invalid entries");
  return report;
}

}  // namespace hichom
