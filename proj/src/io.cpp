#include "hichom/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>

#include "hichom/errors.hpp"

namespace hichom {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw Error(ErrorCode::ValidationError, "cannot create output directory '" + path + "'");
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::ValidationError, "cannot write '" + path + "'");
  out << content;
}

void write_vtk(const std::string& path, const StructuredMesh& mesh,
               const std::vector<std::pair<std::string, const FeField*>>& point_fields,
               const std::string& title) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::ValidationError, "cannot write '" + path + "'");

  out << "# vtk DataFile Version 2.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.node_count() << " double\n";
  for (const Vec2& p : mesh.nodes)
    out << format_double(p[0]) << ' ' << format_double(p[1]) << " 0\n";

  out << "CELLS " << mesh.element_count() << ' ' << 5 * mesh.element_count() << '\n';
  for (const auto& conn : mesh.elements)
    out << "4 " << conn[0] << ' ' << conn[1] << ' ' << conn[2] << ' ' << conn[3] << '\n';
  out << "CELL_TYPES " << mesh.element_count() << '\n';
  for (int e = 0; e < mesh.element_count(); ++e) out << "9\n";

  out << "CELL_DATA " << mesh.element_count() << "\nSCALARS phase int 1\nLOOKUP_TABLE default\n";
  for (Phase p : mesh.element_phase) out << (p == Phase::Inclusion ? 1 : 0) << '\n';

  if (!point_fields.empty()) {
    out << "POINT_DATA " << mesh.node_count() << '\n';
    for (const auto& [name, field] : point_fields) {
      if (field->components == 1) {
        out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (int v = 0; v < mesh.node_count(); ++v) out << format_double((*field)(v, 0)) << '\n';
      } else {
        out << "VECTORS " << name << " double\n";
        for (int v = 0; v < mesh.node_count(); ++v)
          out << format_double((*field)(v, 0)) << ' ' << format_double((*field)(v, 1)) << " 0\n";
      }
    }
  }
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::ValidationError, "cannot write '" + path + "'");
  for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

Json matrix2_json(const Mat2& m) {
  return Json::array({Json::array({m(0, 0), m(0, 1)}), Json::array({m(1, 0), m(1, 1)})});
}

Json rank4_json(const Rank4& t) {
  const Eigen::Matrix3d& v = t.voigt();
  Json rows = Json::array();
  for (int i = 0; i < 3; ++i) rows.push_back(Json::array({v(i, 0), v(i, 1), v(i, 2)}));
  return Json{{"voigt", rows}, {"voigtOrder", "11,22,12"}};
}

Json tensors_json(const EffectiveTensors& t) {
  Json j;
  j["aHom"] = {{"energyForm", matrix2_json(t.a_hom)}, {"averagingForm", matrix2_json(t.a_hom_averaging)}};
  j["bHom"] = {{"energyForm", rank4_json(t.b_hom)}, {"averagingForm", rank4_json(t.b_hom_averaging)}};
  j["cHom"] = {{"weakFormConsistent", rank4_json(t.c_hom_weak)},
               {"eq31Verbatim", rank4_json(t.c_hom_verbatim)},
               {"configuredMode",
                t.c_mode == CHomMode::WeakFormConsistent ? "weakFormConsistent" : "eq31Verbatim"}};
  j["rHom"] = {{"inclusionOnly", rank4_json(t.r_hom_inclusion)},
               {"fullCell", rank4_json(t.r_hom_full)},
               {"configuredDomain", t.rt_domain == RTDomain::InclusionOnly ? "inclusionOnly" : "fullCell"}};
  j["tHom"] = {{"inclusionOnly", rank4_json(t.t_hom_inclusion)},
               {"fullCell", rank4_json(t.t_hom_full)},
               {"configuredDomain", t.rt_domain == RTDomain::InclusionOnly ? "inclusionOnly" : "fullCell"}};
  return j;
}

Json convergence_report_json(const ConvergenceReport& r) {
  Json j;
  j["epsilons"] = r.epsilons;
  j["phiL2Errors"] = r.phi_l2_errors;
  j["uL2Errors"] = r.u_l2_errors;
  j["uH1Distances"] = r.u_h1_distances;
  j["correctorResiduals"] = r.corrector_residuals;
  j["uncorrectedGradErrors"] = r.uncorrected_grad_errors;
  j["phiH1Norms"] = r.phi_h1_norms;
  j["uH1Norms"] = r.u_h1_norms;
  j["wScaledH1Norms"] = r.w_scaled_h1_norms;
  j["splittingResiduals"] = r.splitting_residuals;
  j["tensorCrossChecks"] = r.tensor_cross_checks;
  j["phiErrorsMonotone"] = r.phi_monotone;
  j["uErrorsMonotone"] = r.u_monotone;
  j["correctorImproves"] = r.corrector_improves;
  j["boundMonitorRatio"] = r.bound_monitor_ratio;
  j["wMonitorRatio"] = r.w_monitor_ratio;
  j["tensors"] = tensors_json(r.tensors);
  return j;
}

}  // namespace hichom
