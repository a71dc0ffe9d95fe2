#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hichom/config.hpp"

namespace hichom {

inline constexpr const char* kReportFormatVersion = "hichom-report-1";

// Legacy-VTK (ASCII v2.0) unstructured-grid writer: quad cells, per-element
// phase labels, and any number of named scalar / vector point-data arrays.
void write_vtk(const std::string& path, const StructuredMesh& mesh,
               const std::vector<std::pair<std::string, const FeField*>>& point_fields,
               const std::string& title = "hichom");

// CSV with a header row; numbers are written with full round-trip precision.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

void write_text_file(const std::string& path, const std::string& content);

std::string format_double(double v);

// JSON fragments used by the report writers.
Json matrix2_json(const Mat2& m);
Json rank4_json(const Rank4& t);
Json tensors_json(const EffectiveTensors& tensors);
Json convergence_report_json(const ConvergenceReport& report);

void ensure_directory(const std::string& path);

}  // namespace hichom
