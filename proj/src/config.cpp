#include "hichom/config.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>

#include "hichom/errors.hpp"

namespace hichom {

double ScalarData::operator()(const Vec2& x) const {
  switch (kind) {
    case Kind::Constant: return value;
    case Kind::Linear: return gradient.dot(x) + offset;
    case Kind::SineProduct: return amplitude * std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]);
  }
  return 0.0;
}

std::function<double(const Vec2&)> ScalarData::function() const {
  return [copy = *this](const Vec2& x) { return copy(x); };
}

ScalarData ScalarData::constant(double v) {
  ScalarData d;
  d.kind = Kind::Constant;
  d.value = v;
  return d;
}

ScalarData ScalarData::linear(const Vec2& gradient, double offset) {
  ScalarData d;
  d.kind = Kind::Linear;
  d.gradient = gradient;
  d.offset = offset;
  return d;
}

ScalarData ScalarData::sine_product(double amplitude) {
  ScalarData d;
  d.kind = Kind::SineProduct;
  d.amplitude = amplitude;
  return d;
}

Vec2 VectorData::operator()(const Vec2&) const { return value; }

std::function<Vec2(const Vec2&)> VectorData::function() const {
  return [copy = *this](const Vec2& x) { return copy(x); };
}

VectorData VectorData::constant(const Vec2& v) {
  VectorData d;
  d.value = v;
  return d;
}

Command command_from_string(const std::string& name) {
  if (name == "cell") return Command::Cell;
  if (name == "tensors") return Command::Tensors;
  if (name == "macro") return Command::Macro;
  if (name == "dns") return Command::Dns;
  if (name == "converge") return Command::Converge;
  if (name == "selftest") return Command::Selftest;
  throw Error(ErrorCode::ValidationError, "command: unknown command '" + name + "'");
}

const char* command_to_string(Command c) {
  switch (c) {
    case Command::Cell: return "cell";
    case Command::Tensors: return "tensors";
    case Command::Macro: return "macro";
    case Command::Dns: return "dns";
    case Command::Converge: return "converge";
    case Command::Selftest: return "selftest";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::ValidationError, key + ": " + what);
}

void reject_unknown_keys(const Json& j, const std::set<std::string>& known, const std::string& prefix) {
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) fail(prefix.empty() ? key : prefix + "." + key, "unknown key");
}

Mat2 parse_matrix2(const Json& j, const std::string& key) {
  if (j.is_number()) return j.get<double>() * Mat2::Identity();
  if (j.is_array() && j.size() == 2 && j[0].is_array() && j[0].size() == 2 && j[1].size() == 2) {
    Mat2 m;
    m << j[0][0].get<double>(), j[0][1].get<double>(), j[1][0].get<double>(), j[1][1].get<double>();
    return m;
  }
  fail(key, "expected a number or a 2x2 array");
}

IsotropicPair parse_pair(const Json& j, const std::string& key, const char* first, const char* second) {
  if (!j.is_object()) fail(key, "expected an object");
  reject_unknown_keys(j, {first, second}, key);
  IsotropicPair p;
  if (!j.contains(first) || !j.contains(second)) fail(key, std::string("requires '") + first + "' and '" + second + "'");
  p.lambda = j[first].get<double>();
  p.mu = j[second].get<double>();
  return p;
}

ScalarData parse_scalar_data(const Json& j, const std::string& key) {
  if (j.is_number()) return ScalarData::constant(j.get<double>());
  if (!j.is_object() || !j.contains("kind")) fail(key, "expected a number or an object with 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "constant") {
    reject_unknown_keys(j, {"kind", "value"}, key);
    return ScalarData::constant(j.value("value", 0.0));
  }
  if (kind == "linear") {
    reject_unknown_keys(j, {"kind", "gradient", "offset"}, key);
    Vec2 grad(0.0, 0.0);
    if (j.contains("gradient")) {
      if (!j["gradient"].is_array() || j["gradient"].size() != 2) fail(key + ".gradient", "expected [gx, gy]");
      grad = Vec2(j["gradient"][0].get<double>(), j["gradient"][1].get<double>());
    }
    return ScalarData::linear(grad, j.value("offset", 0.0));
  }
  if (kind == "sineProduct") {
    reject_unknown_keys(j, {"kind", "amplitude"}, key);
    return ScalarData::sine_product(j.value("amplitude", 1.0));
  }
  fail(key + ".kind", "expected 'constant', 'linear', or 'sineProduct'");
}

VectorData parse_vector_data(const Json& j, const std::string& key) {
  if (j.is_array() && j.size() == 2)
    return VectorData::constant(Vec2(j[0].get<double>(), j[1].get<double>()));
  if (j.is_object() && j.value("kind", "") == "constant" && j.contains("value")) {
    reject_unknown_keys(j, {"kind", "value"}, key);
    return parse_vector_data(j["value"], key + ".value");
  }
  fail(key, "expected [gx, gy] or {kind: 'constant', value: [gx, gy]}");
}

Json matrix2_to_json(const Mat2& m) {
  return Json::array({Json::array({m(0, 0), m(0, 1)}), Json::array({m(1, 0), m(1, 1)})});
}

}  // namespace

void RunConfig::validate() const {
  try {
    geometry.validate();
  } catch (const Error& e) {
    const char* key = geometry.kind == UnitCellGeometry::Kind::DiskInclusion ? "geometry.radius"
                      : geometry.kind == UnitCellGeometry::Kind::Laminate    ? "geometry.layerFraction"
                                                                             : "geometry.cells";
    fail(key, e.message());
  }
  if (geometry.kind == UnitCellGeometry::Kind::IndicatorGrid) {
    bool any_false = false;
    for (const auto& row : geometry.grid)
      for (bool b : row) any_false = any_false || !b;
    if (!any_false) fail("geometry.cells", "indicator grid needs at least one matrix cell");
  }
  try {
    coefficients.validate();
  } catch (const Error& e) {
    fail("coefficients", e.message());
  }
  if (cell_n < 4) fail("cell.n", "must be >= 4");
  if (macro_n < 4) fail("macro.n", "must be >= 4");
  if (!(edge_length > 0.0)) fail("macro.edgeLength", "must be positive");
  if (cells_per_period < 4) fail("dns.cellsPerPeriod", "must be >= 4");
  if (epsilons.empty()) fail("dns.epsilons", "must not be empty");
  for (double eps : epsilons) {
    const double k = edge_length / eps;
    if (!(eps > 0.0) || std::abs(k - std::round(k)) > 1e-9 * std::max(1.0, k) || std::round(k) < 1.0)
      throw Error(ErrorCode::LadderMismatch,
                  "dns.epsilons: " + std::to_string(eps) + " does not tile the domain with whole cells");
  }
  try {
    solver.validate();
  } catch (const Error& e) {
    fail("solver", e.message());
  }
}

StudySetup RunConfig::study_setup(int threads) const {
  StudySetup s;
  s.geometry = geometry;
  s.coeffs = coefficients;
  s.cell_n = cell_n;
  s.macro_n = macro_n;
  s.edge_length = edge_length;
  s.epsilons = epsilons;
  s.cells_per_period = cells_per_period;
  s.solver = solver;
  s.c_mode = c_mode;
  s.rt_domain = rt_domain;
  s.f = f.function();
  s.g = g.function();
  s.h = h.function();
  s.threads = threads;
  return s;
}

namespace {

UnitCellGeometry parse_geometry(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) fail("geometry", "expected an object with 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "disk") {
    reject_unknown_keys(j, {"kind", "radius"}, "geometry");
    return UnitCellGeometry::disk(j.value("radius", 0.25));
  }
  if (kind == "laminate") {
    reject_unknown_keys(j, {"kind", "layerFraction"}, "geometry");
    return UnitCellGeometry::laminate(j.value("layerFraction", 0.5));
  }
  if (kind == "grid") {
    reject_unknown_keys(j, {"kind", "cells"}, "geometry");
    if (!j.contains("cells") || !j["cells"].is_array()) fail("geometry.cells", "expected an array of rows");
    std::vector<std::vector<bool>> grid;
    for (const auto& row : j["cells"]) {
      std::vector<bool> r;
      for (const auto& v : row) r.push_back(v.get<bool>());
      grid.push_back(std::move(r));
    }
    return UnitCellGeometry::indicator(std::move(grid));
  }
  fail("geometry.kind", "expected 'disk', 'laminate', or 'grid'");
}

PhaseCoefficients parse_coefficients(const Json& j) {
  PhaseCoefficients c;
  reject_unknown_keys(j, {"a", "B", "R", "C", "gamma"}, "coefficients");
  if (j.contains("a")) {
    const Json& a = j["a"];
    reject_unknown_keys(a, {"matrix", "inclusion"}, "coefficients.a");
    if (a.contains("matrix")) c.a[Phase::Matrix] = parse_matrix2(a["matrix"], "coefficients.a.matrix");
    if (a.contains("inclusion"))
      c.a[Phase::Inclusion] = parse_matrix2(a["inclusion"], "coefficients.a.inclusion");
  }
  if (j.contains("B")) {
    const Json& b = j["B"];
    reject_unknown_keys(b, {"matrix", "inclusion"}, "coefficients.B");
    if (b.contains("matrix"))
      c.B[Phase::Matrix] = parse_pair(b["matrix"], "coefficients.B.matrix", "lambda", "mu");
    if (b.contains("inclusion"))
      c.B[Phase::Inclusion] = parse_pair(b["inclusion"], "coefficients.B.inclusion", "lambda", "mu");
  }
  if (j.contains("R")) c.R = parse_pair(j["R"], "coefficients.R", "lambda", "mu");
  if (j.contains("C")) {
    const Json& cc = j["C"];
    reject_unknown_keys(cc, {"matrix", "inclusion"}, "coefficients.C");
    if (cc.contains("matrix"))
      c.C[Phase::Matrix] = parse_pair(cc["matrix"], "coefficients.C.matrix", "alpha", "beta");
    if (cc.contains("inclusion"))
      c.C[Phase::Inclusion] = parse_pair(cc["inclusion"], "coefficients.C.inclusion", "alpha", "beta");
  }
  if (j.contains("gamma")) c.gamma = j["gamma"].get<double>();
  return c;
}

}  // namespace

RunConfig parse_config_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "configuration root must be an object");
  reject_unknown_keys(j,
                      {"command", "geometry", "coefficients", "cell", "macro", "dns", "solver", "tensors",
                       "data", "output"},
                      "");
  RunConfig cfg;
  if (!j.contains("command")) fail("command", "required");
  cfg.command = command_from_string(j["command"].get<std::string>());

  if (j.contains("geometry")) cfg.geometry = parse_geometry(j["geometry"]);
  if (j.contains("coefficients")) cfg.coefficients = parse_coefficients(j["coefficients"]);
  if (j.contains("cell")) {
    reject_unknown_keys(j["cell"], {"n"}, "cell");
    cfg.cell_n = j["cell"].value("n", cfg.cell_n);
  }
  if (j.contains("macro")) {
    reject_unknown_keys(j["macro"], {"n", "edgeLength"}, "macro");
    cfg.macro_n = j["macro"].value("n", cfg.macro_n);
    cfg.edge_length = j["macro"].value("edgeLength", cfg.edge_length);
  }
  if (j.contains("dns")) {
    reject_unknown_keys(j["dns"], {"epsilons", "cellsPerPeriod"}, "dns");
    if (j["dns"].contains("epsilons")) cfg.epsilons = j["dns"]["epsilons"].get<std::vector<double>>();
    cfg.cells_per_period = j["dns"].value("cellsPerPeriod", cfg.cells_per_period);
  }
  if (j.contains("solver")) {
    const Json& s = j["solver"];
    reject_unknown_keys(s, {"method", "tolerance", "maxIterations", "quadratureOrder"}, "solver");
    if (s.contains("method")) {
      const std::string m = s["method"].get<std::string>();
      if (m == "direct")
        cfg.solver.method = SolverConfig::Method::DirectFactorization;
      else if (m == "cg")
        cfg.solver.method = SolverConfig::Method::ConjugateGradient;
      else
        fail("solver.method", "expected 'direct' or 'cg'");
    }
    cfg.solver.tolerance = s.value("tolerance", cfg.solver.tolerance);
    cfg.solver.max_iterations = s.value("maxIterations", cfg.solver.max_iterations);
    cfg.solver.quadrature_order = s.value("quadratureOrder", cfg.solver.quadrature_order);
  }
  if (j.contains("tensors")) {
    const Json& t = j["tensors"];
    reject_unknown_keys(t, {"cHomMode", "rtDomain"}, "tensors");
    if (t.contains("cHomMode")) {
      const std::string m = t["cHomMode"].get<std::string>();
      if (m == "weakFormConsistent")
        cfg.c_mode = CHomMode::WeakFormConsistent;
      else if (m == "eq31Verbatim")
        cfg.c_mode = CHomMode::Eq31Verbatim;
      else
        fail("tensors.cHomMode", "expected 'weakFormConsistent' or 'eq31Verbatim'");
    }
    if (t.contains("rtDomain")) {
      const std::string d = t["rtDomain"].get<std::string>();
      if (d == "inclusionOnly")
        cfg.rt_domain = RTDomain::InclusionOnly;
      else if (d == "fullCell")
        cfg.rt_domain = RTDomain::FullCell;
      else
        fail("tensors.rtDomain", "expected 'inclusionOnly' or 'fullCell'");
    }
  }
  if (j.contains("data")) {
    const Json& d = j["data"];
    reject_unknown_keys(d, {"f", "g", "h"}, "data");
    if (d.contains("f")) cfg.f = parse_scalar_data(d["f"], "data.f");
    if (d.contains("g")) cfg.g = parse_vector_data(d["g"], "data.g");
    if (d.contains("h")) cfg.h = parse_scalar_data(d["h"], "data.h");
  }
  if (j.contains("output")) {
    const Json& o = j["output"];
    reject_unknown_keys(o, {"directory", "snapshots"}, "output");
    cfg.output_dir = o.value("directory", cfg.output_dir);
    cfg.snapshots = o.value("snapshots", cfg.snapshots);
  }

  cfg.validate();
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open configuration file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed JSON: ") + e.what());
  }
  return parse_config_json(j);
}

namespace {

Json scalar_data_to_json(const ScalarData& d) {
  switch (d.kind) {
    case ScalarData::Kind::Constant: return Json{{"kind", "constant"}, {"value", d.value}};
    case ScalarData::Kind::Linear:
      return Json{{"kind", "linear"}, {"gradient", {d.gradient[0], d.gradient[1]}}, {"offset", d.offset}};
    case ScalarData::Kind::SineProduct: return Json{{"kind", "sineProduct"}, {"amplitude", d.amplitude}};
  }
  return Json();
}

Json geometry_to_json(const UnitCellGeometry& g) {
  switch (g.kind) {
    case UnitCellGeometry::Kind::DiskInclusion: return Json{{"kind", "disk"}, {"radius", g.radius}};
    case UnitCellGeometry::Kind::Laminate:
      return Json{{"kind", "laminate"}, {"layerFraction", g.layer_fraction}};
    case UnitCellGeometry::Kind::IndicatorGrid: {
      Json rows = Json::array();
      for (const auto& row : g.grid) {
        Json r = Json::array();
        for (bool b : row) r.push_back(b);
        rows.push_back(r);
      }
      return Json{{"kind", "grid"}, {"cells", rows}};
    }
  }
  return Json();
}

}  // namespace

Json config_to_json(const RunConfig& cfg) {
  Json j;
  j["command"] = command_to_string(cfg.command);
  j["geometry"] = geometry_to_json(cfg.geometry);
  j["coefficients"] = {
      {"a",
       {{"matrix", matrix2_to_json(cfg.coefficients.a.at(Phase::Matrix))},
        {"inclusion", matrix2_to_json(cfg.coefficients.a.at(Phase::Inclusion))}}},
      {"B",
       {{"matrix",
         {{"lambda", cfg.coefficients.B.at(Phase::Matrix).lambda}, {"mu", cfg.coefficients.B.at(Phase::Matrix).mu}}},
        {"inclusion",
         {{"lambda", cfg.coefficients.B.at(Phase::Inclusion).lambda},
          {"mu", cfg.coefficients.B.at(Phase::Inclusion).mu}}}}},
      {"R", {{"lambda", cfg.coefficients.R.lambda}, {"mu", cfg.coefficients.R.mu}}},
      {"C",
       {{"matrix",
         {{"alpha", cfg.coefficients.C.at(Phase::Matrix).lambda}, {"beta", cfg.coefficients.C.at(Phase::Matrix).mu}}},
        {"inclusion",
         {{"alpha", cfg.coefficients.C.at(Phase::Inclusion).lambda},
          {"beta", cfg.coefficients.C.at(Phase::Inclusion).mu}}}}},
      {"gamma", cfg.coefficients.gamma}};
  j["cell"] = {{"n", cfg.cell_n}};
  j["macro"] = {{"n", cfg.macro_n}, {"edgeLength", cfg.edge_length}};
  j["dns"] = {{"epsilons", cfg.epsilons}, {"cellsPerPeriod", cfg.cells_per_period}};
  j["solver"] = {
      {"method", cfg.solver.method == SolverConfig::Method::DirectFactorization ? "direct" : "cg"},
      {"tolerance", cfg.solver.tolerance},
      {"maxIterations", cfg.solver.max_iterations},
      {"quadratureOrder", cfg.solver.quadrature_order}};
  j["tensors"] = {{"cHomMode", cfg.c_mode == CHomMode::WeakFormConsistent ? "weakFormConsistent" : "eq31Verbatim"},
                  {"rtDomain", cfg.rt_domain == RTDomain::InclusionOnly ? "inclusionOnly" : "fullCell"}};
  j["data"] = {{"f", scalar_data_to_json(cfg.f)},
               {"g", {{"kind", "constant"}, {"value", {cfg.g.value[0], cfg.g.value[1]}}}},
               {"h", scalar_data_to_json(cfg.h)}};
  j["output"] = {{"directory", cfg.output_dir}, {"snapshots", cfg.snapshots}};
  return j;
}

}  // namespace hichom
