#include "hichom/run.hpp"

#include <cstdio>
#include <nlohmann/json.hpp>

#include "hichom/cell.hpp"
#include "hichom/errors.hpp"
#include "hichom/io.hpp"
#include "hichom/selftest.hpp"

namespace hichom {

namespace {

std::string out_path(const std::string& dir, const std::string& file) { return dir + "/" + file; }

Json report_skeleton(const RunConfig& config) {
  Json j;
  j["formatVersion"] = kReportFormatVersion;
  j["configEcho"] = config_to_json(config);
  return j;
}

Json field_summary(const StructuredMesh& mesh, const FeField& field) {
  return Json{{"l2Norm", l2_norm(mesh, field)},
              {"h1Seminorm", h1_seminorm(mesh, field)},
              {"h1Norm", h1_norm(mesh, field)}};
}

void run_cell(const RunConfig& config, const std::string& dir, int threads) {
  MeshPtr mesh = build_unit_cell_mesh(config.geometry, config.cell_n);
  const CorrectorSet correctors = solve_cell_problems(mesh, config.coefficients, config.solver, threads);
  const EffectiveTensors tensors =
      assemble_effective_tensors(*mesh, correctors, config.coefficients, config.c_mode, config.rt_domain);

  std::vector<std::pair<std::string, const FeField*>> fields;
  const char* pair_names[3] = {"11", "22", "12"};
  fields.emplace_back("chi1", &correctors.chi[0]);
  fields.emplace_back("chi2", &correctors.chi[1]);
  for (int v = 0; v < 3; ++v) {
    fields.emplace_back(std::string("V") + pair_names[v], &correctors.V[v]);
    fields.emplace_back(std::string("p") + pair_names[v], &correctors.p[v]);
    fields.emplace_back(std::string("W") + pair_names[v], &correctors.W[v]);
  }
  write_vtk(out_path(dir, "correctors.vtk"), *mesh, fields, "unit cell correctors");

  // Corrected energies: the diagonal entries of the effective tensors.
  std::vector<std::vector<double>> rows;
  std::vector<std::string> header = {"family", "i", "j", "energy", "h1Seminorm"};
  for (int i = 0; i < 2; ++i)
    rows.push_back({0.0, double(i + 1), double(i + 1), tensors.a_hom(i, i),
                    h1_seminorm(*mesh, correctors.chi[i])});
  for (int v = 0; v < 3; ++v) {
    const auto [i, j] = voigt_pair(v);
    rows.push_back({1.0, double(i + 1), double(j + 1), tensors.b_hom.voigt()(v, v),
                    h1_seminorm(*mesh, correctors.V[v])});
    rows.push_back({2.0, double(i + 1), double(j + 1), 0.0, h1_seminorm(*mesh, correctors.p[v])});
    rows.push_back({3.0, double(i + 1), double(j + 1), tensors.r_hom_inclusion.voigt()(v, v),
                    h1_seminorm(*mesh, correctors.W[v])});
  }
  write_csv(out_path(dir, "cell_energies.csv"), header, rows);

  Json j = report_skeleton(config);
  j["fields"] = Json::object();
  for (const auto& [name, field] : fields) j["fields"][name] = field_summary(*mesh, *field);
  j["inclusionFraction"] = mesh->inclusion_fraction();
  write_text_file(out_path(dir, "cell.json"), j.dump(2) + "\n");
}

void run_tensors(const RunConfig& config, const std::string& dir, int threads) {
  MeshPtr mesh = build_unit_cell_mesh(config.geometry, config.cell_n);
  const CorrectorSet correctors = solve_cell_problems(mesh, config.coefficients, config.solver, threads);
  const EffectiveTensors tensors =
      assemble_effective_tensors(*mesh, correctors, config.coefficients, config.c_mode, config.rt_domain);

  Json j = report_skeleton(config);
  j["tensors"] = tensors_json(tensors);
  j["crossChecks"] = tensor_cross_check(tensors);
  const double fraction = mesh->inclusion_fraction();
  j["inclusionFraction"] = fraction;
  Json bounds = Json::object();
  if (fraction > 0.0 && fraction < 1.0) {
    const Mat2& am = config.coefficients.a.at(Phase::Matrix);
    const Mat2& ai = config.coefficients.a.at(Phase::Inclusion);
    for (int i = 0; i < 2; ++i) {
      const BoundInterval b = voigt_reuss_bounds(am(i, i), ai(i, i), fraction);
      const double value = tensors.a_hom(i, i);
      bounds["aHom" + std::to_string(i + 1) + std::to_string(i + 1)] = {
          {"reuss", b.reuss}, {"voigt", b.voigt}, {"value", value},
          {"inside", value >= b.reuss - 1e-9 && value <= b.voigt + 1e-9}};
    }
  }
  j["boundChecks"] = bounds;
  write_text_file(out_path(dir, "tensors.json"), j.dump(2) + "\n");

  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) rows.push_back({0.0, double(i), double(k), tensors.a_hom(i, k)});
  const auto add_rank4 = [&rows](double tag, const Rank4& t) {
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) rows.push_back({tag, double(i), double(k), t.voigt()(i, k)});
  };
  add_rank4(1.0, tensors.b_hom);
  add_rank4(2.0, tensors.c_hom());
  add_rank4(3.0, tensors.r_hom());
  add_rank4(4.0, tensors.t_hom());
  write_csv(out_path(dir, "tensors.csv"), {"tensor", "row", "col", "value"}, rows);
}

void run_macro(const RunConfig& config, const std::string& dir, int threads) {
  MeshPtr cell_mesh = build_unit_cell_mesh(config.geometry, config.cell_n);
  const CorrectorSet correctors =
      solve_cell_problems(cell_mesh, config.coefficients, config.solver, threads);
  MacroProblem problem;
  problem.mesh = build_macro_mesh(config.edge_length, config.macro_n);
  problem.tensors =
      assemble_effective_tensors(*cell_mesh, correctors, config.coefficients, config.c_mode, config.rt_domain);
  problem.f = config.f.function();
  problem.g = config.g.function();
  problem.h = config.h.function();

  const MacroSolution sol = solve_macro(problem, config.solver);
  write_vtk(out_path(dir, "macro.vtk"), *problem.mesh,
            {{"phi0", &sol.phi0}, {"v0", &sol.v0}, {"w0", &sol.w0}, {"u0", &sol.u0}}, "homogenized solution");

  Json j = report_skeleton(config);
  j["phi0"] = field_summary(*problem.mesh, sol.phi0);
  j["v0"] = field_summary(*problem.mesh, sol.v0);
  j["w0"] = field_summary(*problem.mesh, sol.w0);
  j["u0"] = field_summary(*problem.mesh, sol.u0);
  write_text_file(out_path(dir, "macro.json"), j.dump(2) + "\n");

  std::vector<std::vector<double>> rows;
  const FeField* fields[4] = {&sol.phi0, &sol.v0, &sol.w0, &sol.u0};
  for (int i = 0; i < 4; ++i)
    rows.push_back({double(i), l2_norm(*problem.mesh, *fields[i]), h1_norm(*problem.mesh, *fields[i])});
  write_csv(out_path(dir, "macro_norms.csv"), {"field", "l2Norm", "h1Norm"}, rows);
}

void run_dns(const RunConfig& config, const std::string& dir, int threads) {
  (void)threads;
  Json j = report_skeleton(config);
  Json per_eps = Json::array();
  std::vector<std::vector<double>> rows;
  for (double eps : config.epsilons) {
    DnsProblem problem;
    problem.epsilon = eps;
    problem.cells_per_period = config.cells_per_period;
    problem.geometry = config.geometry;
    problem.coeffs = config.coefficients;
    problem.f = config.f.function();
    problem.g = config.g.function();
    problem.h = config.h.function();
    problem.edge_length = config.edge_length;
    MeshPtr mesh = build_dns_mesh(problem);
    const DnsSolution sol = solve_dns(problem, mesh, config.solver);

    const int k = problem.periods();
    write_vtk(out_path(dir, "dns_k" + std::to_string(k) + ".vtk"), *mesh,
              {{"phi", &sol.phi}, {"u", &sol.u}, {"v", &sol.v}, {"w", &sol.w}},
              "fine-scale solution, epsilon = 1/" + std::to_string(k));

    FeField scaled_w = sol.w;
    scaled_w.values *= std::pow(eps, sol.gamma);
    const double split = splitting_residual(sol);
    rows.push_back({eps, h1_norm(*mesh, sol.phi), h1_norm(*mesh, sol.u), h1_norm(*mesh, scaled_w), split,
                    inclusion_strain_energy(*mesh, sol.u)});
    per_eps.push_back(Json{{"epsilon", eps},
                           {"phi", field_summary(*mesh, sol.phi)},
                           {"u", field_summary(*mesh, sol.u)},
                           {"v", field_summary(*mesh, sol.v)},
                           {"wScaledH1Norm", h1_norm(*mesh, scaled_w)},
                           {"splittingResidual", split}});
  }
  j["runs"] = per_eps;
  write_text_file(out_path(dir, "dns.json"), j.dump(2) + "\n");
  write_csv(out_path(dir, "dns.csv"),
            {"epsilon", "phiH1Norm", "uH1Norm", "wScaledH1Norm", "splittingResidual",
             "inclusionStrainEnergy"},
            rows);
}

void run_converge(const RunConfig& config, const std::string& dir, int threads) {
  StudySetup setup = config.study_setup(threads);
  if (config.snapshots) {
    setup.on_entry = [&dir](size_t index, const StructuredMesh& mesh, const DnsSolution& sol) {
      std::vector<std::pair<std::string, const FeField*>> fields = {{"phi", &sol.phi}};
      if (sol.u.mesh) {
        fields.emplace_back("u", &sol.u);
        fields.emplace_back("v", &sol.v);
        fields.emplace_back("w", &sol.w);
      }
      write_vtk(dir + "/snapshot_" + std::to_string(index) + ".vtk", mesh, fields, "ladder snapshot");
    };
  }
  const ConvergenceReport report = run_convergence_study(setup);

  Json j = report_skeleton(config);
  j["report"] = convergence_report_json(report);
  write_text_file(out_path(dir, "convergence.json"), j.dump(2) + "\n");

  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < report.epsilons.size(); ++i)
    rows.push_back({report.epsilons[i], report.phi_l2_errors[i], report.u_l2_errors[i],
                    report.u_h1_distances[i], report.corrector_residuals[i],
                    report.uncorrected_grad_errors[i], report.phi_h1_norms[i], report.u_h1_norms[i],
                    report.w_scaled_h1_norms[i], report.splitting_residuals[i]});
  write_csv(out_path(dir, "convergence.csv"),
            {"epsilon", "phiL2Error", "uL2Error", "uH1Distance", "correctorResidual",
             "uncorrectedGradError", "phiH1Norm", "uH1Norm", "wScaledH1Norm", "splittingResidual"},
            rows);
}

int run_selftest_command(const RunConfig& config, const std::string& dir, int threads) {
  const SelftestReport report = run_selftest(threads);
  for (const CriterionResult& c : report.criteria)
    std::printf("%s criterion %d: %s (%.2f s) -- %s\n", c.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                c.seconds, c.details.c_str());
  write_text_file(out_path(dir, "selftest.json"), report.report_json);
  std::printf("%s\n", report.all_pass ? "selftest: all criteria passed" : "selftest: FAILURES present");
  (void)config;
  return report.all_pass ? 0 : 3;
}

}  // namespace

int run_command(const RunConfig& config, const RunOptions& options) {
  const std::string dir = options.out_override.empty() ? config.output_dir : options.out_override;
  ensure_directory(dir);
  const int threads = std::max(1, options.threads);
  switch (config.command) {
    case Command::Cell: run_cell(config, dir, threads); return 0;
    case Command::Tensors: run_tensors(config, dir, threads); return 0;
    case Command::Macro: run_macro(config, dir, threads); return 0;
    case Command::Dns: run_dns(config, dir, threads); return 0;
    case Command::Converge: run_converge(config, dir, threads); return 0;
    case Command::Selftest: return run_selftest_command(config, dir, threads);
  }
  return 1;
}

}  // namespace hichom
