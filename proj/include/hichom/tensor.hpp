#pragma once

#include <Eigen/Dense>

namespace hichom {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Voigt index order for symmetric 2x2 matrices: 0 -> (0,0), 1 -> (1,1), 2 -> (0,1).
inline int voigt_index(int i, int j) { return (i == j) ? i : 2; }

inline Mat2 voigt_to_matrix(const Eigen::Vector3d& v) {
  Mat2 m;
  m << v[0], v[2], v[2], v[1];
  return m;
}

// Strain convention: a symmetric matrix E maps to (E00, E11, 2*E01) so that
// contractions B:E and E:B:E reduce to plain matrix algebra on the 3-vector.
inline Eigen::Vector3d strain_to_voigt(const Mat2& e) {
  return {e(0, 0), e(1, 1), e(0, 1) + e(1, 0)};
}

// Stress-like tensors keep the plain off-diagonal entry.
inline Eigen::Vector3d stress_to_voigt(const Mat2& s) {
  return {s(0, 0), s(1, 1), 0.5 * (s(0, 1) + s(1, 0))};
}

// Frobenius double contraction of two symmetric matrices in Voigt form.
inline double stress_dot(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return a[0] * b[0] + a[1] * b[1] + 2.0 * a[2] * b[2];
}

// The three canonical symmetric loadings sym(e^i x e^j) in Voigt strain form:
// E^00 -> (1,0,0), E^11 -> (0,1,0), sym(e^0 x e^1) -> (0,0,1).
inline Eigen::Vector3d canonical_strain(int voigt) {
  Eigen::Vector3d e = Eigen::Vector3d::Zero();
  e[voigt] = 1.0;
  return e;
}

// Minor-symmetric fourth order tensor on R^{2x2}, stored as its 3x3 Voigt
// matrix (rows/cols in the order 00, 11, 01). Minor symmetries are exact by
// storage; major symmetry holds iff the Voigt matrix is symmetric.
class Rank4 {
 public:
  Rank4() : v_(Eigen::Matrix3d::Zero()) {}
  explicit Rank4(const Eigen::Matrix3d& voigt) : v_(voigt) {}

  // lambda * dij dkh + mu * (dik djh + dih djk)
  static Rank4 isotropic(double lambda, double mu) {
    Eigen::Matrix3d v;
    v << lambda + 2 * mu, lambda, 0,  //
        lambda, lambda + 2 * mu, 0,   //
        0, 0, mu;
    return Rank4(v);
  }

  static Rank4 zero() { return Rank4(); }

  double operator()(int i, int j, int m, int n) const {
    return v_(voigt_index(i, j), voigt_index(m, n));
  }

  const Eigen::Matrix3d& voigt() const { return v_; }
  Eigen::Matrix3d& voigt() { return v_; }

  // B : E for a symmetric E given in Voigt strain form; returns Voigt stress.
  Eigen::Vector3d contract(const Eigen::Vector3d& strain) const { return v_ * strain; }

  // E1 : B : E2 for symmetric matrices in Voigt strain form.
  double quadratic(const Eigen::Vector3d& e1, const Eigen::Vector3d& e2) const {
    return e1.dot(v_ * e2);
  }

  Rank4 operator+(const Rank4& o) const { return Rank4(v_ + o.v_); }
  Rank4 operator-(const Rank4& o) const { return Rank4(v_ - o.v_); }
  Rank4 operator*(double s) const { return Rank4(v_ * s); }

  double major_symmetry_defect() const { return (v_ - v_.transpose()).cwiseAbs().maxCoeff(); }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(0.5 * (v_ + v_.transpose()));
    return es.eigenvalues().minCoeff();
  }

  double max_abs() const { return v_.cwiseAbs().maxCoeff(); }

 private:
  Eigen::Matrix3d v_;
};

inline bool is_spd_2x2(const Mat2& a, double tol = 0.0) {
  const Mat2 sym = 0.5 * (a + a.transpose());
  if ((a - sym).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + sym.cwiseAbs().maxCoeff())) return false;
  return sym(0, 0) > tol && sym.determinant() > tol;
}

}  // namespace hichom
