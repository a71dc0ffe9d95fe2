#pragma once

#include <functional>

#include "hichom/effective.hpp"
#include "hichom/fem.hpp"

namespace hichom {

// Homogenized problem on the macro domain: electrostatics for phi0, elasticity
// with electrostriction for v0, and the high-contrast remainder equation for
// w0. The coupling is one-way (phi0 drives the elastic solves).
struct MacroProblem {
  MeshPtr mesh;
  EffectiveTensors tensors;
  std::function<double(const Vec2&)> f;  // free charge density
  std::function<Vec2(const Vec2&)> g;    // body force
  std::function<double(const Vec2&)> h;  // boundary potential
};

struct MacroSolution {
  FeField phi0, v0, w0, u0;
  bool w0_solved = false;
};

FeField solve_phi0(const MacroProblem& problem, const SolverConfig& cfg);
FeField solve_v0(const MacroProblem& problem, const FeField& phi0, const SolverConfig& cfg);
// Requires the configured R_hom to be numerically SPD (smallest Voigt
// eigenvalue > 1e-10); throws DegenerateRHom otherwise.
FeField solve_w0(const MacroProblem& problem, const FeField& v0, const SolverConfig& cfg);
FeField compose_u0(const FeField& v0, const FeField& w0);

MacroSolution solve_macro(const MacroProblem& problem, const SolverConfig& cfg);

// Electrostriction load of the v0 equation: -int C_hom : (grad phi0 x grad
// phi0) : D(xi). Exposed for the quadratic-coupling checks.
Eigen::VectorXd electrostriction_load(const MacroProblem& problem, const FeField& phi0);

}  // namespace hichom
