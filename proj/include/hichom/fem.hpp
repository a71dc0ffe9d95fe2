#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "hichom/geometry.hpp"
#include "hichom/tensor.hpp"

namespace hichom {

// Nodal finite-element field (bilinear Q1). values is node-major:
// values[node * components + c].
struct FeField {
  MeshPtr mesh;
  int components = 1;
  Eigen::VectorXd values;

  double operator()(int node, int c = 0) const { return values[node * components + c]; }
  double& at(int node, int c = 0) { return values[node * components + c]; }
};

FeField make_field(MeshPtr mesh, int components);

struct SparseOperator {
  Eigen::SparseMatrix<double> matrix;

  int dim() const { return static_cast<int>(matrix.rows()); }
  double symmetry_defect() const;
};

struct SolverConfig {
  enum class Method { DirectFactorization, ConjugateGradient };

  Method method = Method::DirectFactorization;
  double tolerance = 1e-10;  // relative residual (CG)
  int max_iterations = 10000;
  int quadrature_order = 2;  // Gauss points per dimension

  void validate() const;  // tolerance in (0, 1e-4], quadrature_order >= 2
};

using PhaseMatrix = std::map<Phase, Mat2>;
using PhaseTensor = std::map<Phase, Rank4>;
using PhaseScale = std::map<Phase, double>;

// ---------------------------------------------------------------------------
// Quadrature and element geometry

struct GaussPoint {
  Vec2 x;                          // physical position
  double w = 0.0;                  // weight including the Jacobian
  Eigen::Vector4d shape;           // N_a
  Eigen::Matrix<double, 4, 2> dshape;  // dN_a/dx_j in physical coordinates
};

// Gauss points of one element (points_per_dim 2..4). All elements of a
// structured mesh share the same reference tables; positions differ.
std::vector<GaussPoint> element_quadrature(const StructuredMesh& mesh, int e, int points_per_dim = 2);

// ---------------------------------------------------------------------------
// Operator and load assembly

// Discrete form of the scalar diffusion operator, phase-wise constant 2x2 SPD
// coefficient. Phases missing from the map contribute nothing.
SparseOperator assemble_scalar_operator(const StructuredMesh& mesh, const PhaseMatrix& coeff_per_phase);

// Discrete form of the elasticity operator for minor-symmetric fourth order
// coefficients, with an optional per-phase scalar multiplier (used for the
// high-contrast inclusion stiffening). Phases missing from the tensor map
// contribute nothing; missing scale entries default to 1.
SparseOperator assemble_elasticity_operator(const StructuredMesh& mesh, const PhaseTensor& tensor_per_phase,
                                            const PhaseScale& phase_scale = {});

// Convenience check for isotropic pairs (mu > 0, lambda >= 0).
Rank4 elastic_tensor_checked(double lambda, double mu);

// Loads, all full-size nodal vectors:
Eigen::VectorXd assemble_scalar_source_load(const StructuredMesh& mesh,
                                            const std::function<double(const Vec2&)>& f);
Eigen::VectorXd assemble_vector_source_load(const StructuredMesh& mesh,
                                            const std::function<Vec2(const Vec2&)>& g);
// int (a(x) dir) . grad(tau) dx
Eigen::VectorXd assemble_flux_load(const StructuredMesh& mesh, const PhaseMatrix& coeff_per_phase,
                                   const Vec2& direction);
// int (B(x) : E) : D(xi) dx for a constant Voigt strain E
Eigen::VectorXd assemble_strain_load(const StructuredMesh& mesh, const PhaseTensor& tensor_per_phase,
                                     const Eigen::Vector3d& voigt_strain);
// int sigma(x) : D(xi) dx with sigma given in Voigt stress form per Gauss point
Eigen::VectorXd assemble_stress_load(const StructuredMesh& mesh,
                                     const std::function<Eigen::Vector3d(int element, const Vec2&)>& stress);

// ---------------------------------------------------------------------------
// Constraints

// Describes the admissible subspace: periodic identification, pinned values
// (Dirichlet or phase-frozen), and an optional pin of all components of the
// first fully-free node (quotient by constants; the caller subtracts the mean
// afterwards).
struct ConstraintSpec {
  const PeriodicDofMap* periodic = nullptr;
  std::vector<std::tuple<int, int, double>> fixed;  // (node, component, value)
  bool pin_first_free_node = false;

  static ConstraintSpec dirichlet_boundary(const StructuredMesh& mesh,
                                           const std::function<double(const Vec2&)>& h);
  static ConstraintSpec dirichlet_boundary(const StructuredMesh& mesh,
                                           const std::function<Vec2(const Vec2&)>& h);
  static ConstraintSpec periodic_with_pin(const PeriodicDofMap& map);
  // Freezes every component of every node adjacent to an element of `phase`,
  // realizing fields that vanish on that phase region.
  static ConstraintSpec phase_frozen(const StructuredMesh& mesh, Phase phase, double value,
                                     int components);
};

// Reduced system plus the affine map back to full degrees of freedom:
// full = prolongation * reduced + offset.
struct ConstrainedSystem {
  SparseOperator op;
  Eigen::VectorXd rhs;
  Eigen::SparseMatrix<double> prolongation;
  Eigen::VectorXd offset;

  int reduced_dim() const { return static_cast<int>(prolongation.cols()); }
  Eigen::VectorXd recover(const Eigen::VectorXd& reduced) const;
};

ConstrainedSystem apply_constraints(const SparseOperator& op, const Eigen::VectorXd& rhs,
                                    const ConstraintSpec& spec, int components, int node_count);

// ---------------------------------------------------------------------------
// Linear solve

Eigen::VectorXd solve(const SparseOperator& op, const Eigen::VectorXd& rhs, const SolverConfig& cfg);

// ---------------------------------------------------------------------------
// Norms, integrals, point evaluation

double l2_norm(const StructuredMesh& mesh, const FeField& field, int points_per_dim = 2);
double h1_seminorm(const StructuredMesh& mesh, const FeField& field, int points_per_dim = 2);
double h1_norm(const StructuredMesh& mesh, const FeField& field, int points_per_dim = 2);
double mean_value(const StructuredMesh& mesh, const FeField& field, int component);
void shift_mean_to_zero(const StructuredMesh& mesh, FeField& field);

// Coefficient-weighted gradient pairing int (a grad(u)) . grad(v) dx of two
// scalar fields (used by the effective-tensor assembly and energy checks).
double integrate_gradient_pairing(const StructuredMesh& mesh, const PhaseMatrix& coeff_per_phase,
                                  const FeField& u, const FeField& v);

// Point evaluation (clamped to the mesh domain).
double eval_scalar(const StructuredMesh& mesh, const FeField& field, const Vec2& x);
Vec2 eval_scalar_gradient(const StructuredMesh& mesh, const FeField& field, const Vec2& x);
Vec2 eval_vector(const StructuredMesh& mesh, const FeField& field, const Vec2& x);
// Rows are components, columns derivative directions: G(i,j) = d u_i / d x_j.
Mat2 eval_vector_gradient(const StructuredMesh& mesh, const FeField& field, const Vec2& x);

// L2 / H1 errors against closed-form references (manufactured solutions).
double l2_error(const StructuredMesh& mesh, const FeField& field,
                const std::function<double(const Vec2&)>& exact, int points_per_dim = 3);
double l2_error_vector(const StructuredMesh& mesh, const FeField& field,
                       const std::function<Vec2(const Vec2&)>& exact, int points_per_dim = 3);
double h1_seminorm_error(const StructuredMesh& mesh, const FeField& field,
                         const std::function<Vec2(const Vec2&)>& exact_gradient, int points_per_dim = 3);

}  // namespace hichom
