#pragma once

#include <map>

#include "hichom/geometry.hpp"
#include "hichom/tensor.hpp"

namespace hichom {

struct IsotropicPair {
  double lambda = 1.0;
  double mu = 1.0;

  Rank4 tensor() const { return Rank4::isotropic(lambda, mu); }
};

// Per-phase material data of the fine-scale composite: dielectric a, bounded
// elastic tensor B, inclusion stiffening R (active on Y_s only, scaled by
// eps^{-2 gamma}), electrostriction C, and the contrast exponent gamma.
struct PhaseCoefficients {
  std::map<Phase, Mat2> a = {{Phase::Matrix, Mat2::Identity()}, {Phase::Inclusion, 10.0 * Mat2::Identity()}};
  std::map<Phase, IsotropicPair> B = {{Phase::Matrix, {1.0, 1.0}}, {Phase::Inclusion, {2.0, 2.0}}};
  IsotropicPair R = {2.0, 2.0};
  std::map<Phase, IsotropicPair> C = {{Phase::Matrix, {0.3, 0.2}}, {Phase::Inclusion, {0.6, 0.4}}};
  double gamma = 1.0;

  void validate() const;

  std::map<Phase, Rank4> b_tensors() const;
  std::map<Phase, Rank4> c_tensors() const;
  // R evaluated on inclusion elements only (its matrix values never enter the
  // fine-scale operator).
  std::map<Phase, Rank4> r_tensor_inclusion() const;
  std::map<Phase, Rank4> r_tensor_everywhere() const;

  static PhaseCoefficients constant(const Mat2& a, const IsotropicPair& b, const IsotropicPair& r,
                                    const IsotropicPair& c, double gamma = 1.0);
};

}  // namespace hichom
