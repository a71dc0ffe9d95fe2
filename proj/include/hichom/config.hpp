#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "hichom/verification.hpp"

namespace hichom {

using Json = nlohmann::ordered_json;

enum class Command { Cell, Tensors, Macro, Dns, Converge, Selftest };

// Closed-form data fields selectable from the configuration file.
struct ScalarData {
  enum class Kind { Constant, Linear, SineProduct };
  Kind kind = Kind::Constant;
  double value = 0.0;      // Constant
  Vec2 gradient = Vec2::Zero();
  double offset = 0.0;     // Linear: gradient . x + offset
  double amplitude = 0.0;  // SineProduct: amplitude sin(pi x0) sin(pi x1)

  double operator()(const Vec2& x) const;
  std::function<double(const Vec2&)> function() const;

  static ScalarData constant(double v);
  static ScalarData linear(const Vec2& gradient, double offset = 0.0);
  static ScalarData sine_product(double amplitude);
};

struct VectorData {
  enum class Kind { Constant };
  Kind kind = Kind::Constant;
  Vec2 value = Vec2::Zero();

  Vec2 operator()(const Vec2& x) const;
  std::function<Vec2(const Vec2&)> function() const;

  static VectorData constant(const Vec2& v);
};

struct RunConfig {
  Command command = Command::Selftest;
  UnitCellGeometry geometry;     // default: disk r = 0.25
  PhaseCoefficients coefficients;
  int cell_n = 64;
  int macro_n = 64;
  double edge_length = 1.0;
  std::vector<double> epsilons = {0.5, 0.25, 0.125};
  int cells_per_period = 8;
  SolverConfig solver;
  CHomMode c_mode = CHomMode::WeakFormConsistent;
  RTDomain rt_domain = RTDomain::InclusionOnly;
  ScalarData f = ScalarData::constant(1.0);
  VectorData g = VectorData::constant(Vec2(0.0, -1.0));
  ScalarData h = ScalarData::linear(Vec2(1.0, 0.0));
  std::string output_dir = "out";
  bool snapshots = false;  // per-epsilon VTK output of the converge command

  void validate() const;
  StudySetup study_setup(int threads) const;
};

// Parses and validates a configuration file; validation messages name the
// offending key. Defaults are filled for every omitted field.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_json(const Json& j);

// Normalized echo of the configuration (defaults filled), embedded in every
// report.
Json config_to_json(const RunConfig& config);

Command command_from_string(const std::string& name);
const char* command_to_string(Command c);

}  // namespace hichom
