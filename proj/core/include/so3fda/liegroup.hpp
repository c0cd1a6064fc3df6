#pragma once

// Small-matrix geometry of SO(3), its Lie algebra, the unit quaternions and
// SO(4). Matrix norms are the rescaled Frobenius norm sqrt(trace(A A^T) / 2),
// under which |hat(a)| equals the Euclidean norm of a.

#include <Eigen/Core>

#include <utility>

#include "so3fda/error.hpp"

namespace so3fda {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

inline constexpr double kOrthonormalTol = 1e-10;
inline constexpr double kUnitNormTol = 1e-12;
/// Relative singular-value threshold for the uniqueness flags of projections.
inline constexpr double kRankTolRel = 1e-9;
/// Absolute floor on the leading singular value; below it a projection is undefined.
inline constexpr double kRankTolAbs = 1e-12;

/// Rescaled Frobenius norm sqrt(trace(A A^T) / 2).
template <typename Derived>
double rescaled_norm(const Eigen::MatrixBase<Derived>& a) {
  return a.norm() / 1.4142135623730951;
}

/// Element of SO(N), N = 3 or 4. Construction through from_matrix() checks
/// R R^T = I and det R = 1 entrywise within kOrthonormalTol.
template <int N>
class SpecialOrthogonal {
 public:
  using Matrix = Eigen::Matrix<double, N, N>;
  using Vector = Eigen::Matrix<double, N, 1>;

  SpecialOrthogonal() : m_(Matrix::Identity()) {}

  static SpecialOrthogonal identity() { return SpecialOrthogonal(); }
  static SpecialOrthogonal from_matrix(const Matrix& m, double tol = kOrthonormalTol);
  /// Skips validation; for values produced by closed-form group operations.
  static SpecialOrthogonal unchecked(const Matrix& m) { return SpecialOrthogonal(m); }
  static bool is_valid(const Matrix& m, double tol = kOrthonormalTol);

  const Matrix& matrix() const { return m_; }
  double operator()(int r, int c) const { return m_(r, c); }

  SpecialOrthogonal transpose() const { return SpecialOrthogonal(m_.transpose()); }
  SpecialOrthogonal inverse() const { return transpose(); }

  friend SpecialOrthogonal operator*(const SpecialOrthogonal& a, const SpecialOrthogonal& b) {
    return SpecialOrthogonal(a.m_ * b.m_);
  }
  Vector operator*(const Vector& v) const { return m_ * v; }

 private:
  explicit SpecialOrthogonal(const Matrix& m) : m_(m) {}
  Matrix m_;
};

using Rotation3 = SpecialOrthogonal<3>;
using Rotation4 = SpecialOrthogonal<4>;

extern template class SpecialOrthogonal<3>;
extern template class SpecialOrthogonal<4>;

/// Unit quaternion x1 + i x2 + j x3 + k x4, stored as (x1, x2, x3, x4).
class UnitQuaternion {
 public:
  UnitQuaternion() : x_(1.0, 0.0, 0.0, 0.0) {}
  UnitQuaternion(double x1, double x2, double x3, double x4);

  static UnitQuaternion identity() { return {}; }
  /// Validates |x| = 1 within kUnitNormTol.
  static UnitQuaternion from_coeffs(const Vec4& x);
  /// Rescales any nonzero vector to unit length.
  static UnitQuaternion normalized(const Vec4& x);

  const Vec4& coeffs() const { return x_; }
  double operator[](int i) const { return x_[i]; }

  UnitQuaternion operator-() const { return UnitQuaternion(Vec4(-x_)); }
  UnitQuaternion conjugate() const { return UnitQuaternion(Vec4(x_[0], -x_[1], -x_[2], -x_[3])); }
  double dot(const UnitQuaternion& o) const { return x_.dot(o.x_); }

 private:
  explicit UnitQuaternion(const Vec4& x) : x_(x) {}
  Vec4 x_;
};

template <int N>
struct ProjectionResult {
  SpecialOrthogonal<N> rotation;
  bool unique = false;
  /// Non-increasing, nonnegative.
  Eigen::Matrix<double, N, 1> singular_values;
};

using Projection3 = ProjectionResult<3>;
using Projection4 = ProjectionResult<4>;

// so(3) <-> R^3

Mat3 hat(const Vec3& a);
Vec3 vee(const Mat3& skew);

/// Rodriguez formula; series expansions below |a| = 1e-4.
Rotation3 exp_so3(const Vec3& a);

/// Inverse of exp_so3 on the closed ball |a| <= pi. At angle pi both
/// preimages are valid; the axis with first nonzero coordinate positive is
/// returned (see on_cut_locus()).
Vec3 log_so3(const Rotation3& r);

/// Rotation angle of r in [0, pi].
double rotation_angle(const Rotation3& r);

/// True when the rotation angle of r is within tol of pi.
bool on_cut_locus(const Rotation3& r, double tol = 1e-9);

/// Bi-invariant geodesic distance 2 arcsin(|P - Q| / 2), in [0, pi].
double geo_dist(const Rotation3& p, const Rotation3& q);

/// Nearest rotation in the extrinsic metric, U S V^T from an SVD of a.
/// Defined only for rank(a) > 1; throws GeometryError otherwise.
Projection3 project_so3(const Mat3& a);
/// Maximizer of trace(a^T R) over SO(4). unique is false when rank(a) <= 2;
/// throws GeometryError only when the leading singular value vanishes.
Projection4 project_so4(const Mat4& a);

// Unit quaternions and the double covers.

UnitQuaternion quat_mul(const UnitQuaternion& p, const UnitQuaternion& q);
Rotation3 quat_to_rot(const UnitQuaternion& q);
/// Preimage under quat_to_rot with the first nonzero coordinate positive.
UnitQuaternion rot_to_quat(const Rotation3& r);

/// Matrices of v -> p v and v -> v q.
Mat4 left_mult_matrix(const UnitQuaternion& p);
Mat4 right_mult_matrix(const UnitQuaternion& q);

/// v -> p v q as an element of SO(4).
Rotation4 quat_pair_to_so4(const UnitQuaternion& p, const UnitQuaternion& q);

/// Right inverse of quat_pair_to_so4; p has its first nonzero coordinate
/// positive. Throws GeometryError when the reconstruction residual exceeds 1e-6.
std::pair<UnitQuaternion, UnitQuaternion> so4_to_quat_pair(const Rotation4& r);

/// (pi, pi) composed with so4_to_quat_pair: the isometry (P, Q) of SO(3) whose
/// quaternion lift is r.
std::pair<Rotation3, Rotation3> so4_to_isometry(const Rotation4& r);

}  // namespace so3fda
