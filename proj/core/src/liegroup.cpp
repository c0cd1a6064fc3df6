#include "so3fda/liegroup.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace so3fda {

namespace {

constexpr double kSmallAngle = 1e-4;
constexpr double kNearPi = 1e-4;

// Flip the sign of x so that its first nonzero coordinate is positive.
Vec4 canonical_sign(const Vec4& x) {
  for (int i = 0; i < 4; ++i) {
    if (x[i] > 0.0) return x;
    if (x[i] < 0.0) return -x;
  }
  return x;
}

template <int N>
ProjectionResult<N> project_impl(const Eigen::Matrix<double, N, N>& a) {
  using Matrix = Eigen::Matrix<double, N, N>;
  if (!a.allFinite()) throw GeometryError("projection: non-finite matrix entries");
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& d = svd.singularValues();
  if (!(d[0] > kRankTolAbs)) {
    throw GeometryError("projection undefined: leading singular value " + std::to_string(d[0]));
  }
  const Matrix& u = svd.matrixU();
  const Matrix& v = svd.matrixV();
  Matrix s = Matrix::Identity();
  if (u.determinant() * v.determinant() < 0.0) s(N - 1, N - 1) = -1.0;

  ProjectionResult<N> out;
  out.rotation = SpecialOrthogonal<N>::unchecked(u * s * v.transpose());
  out.singular_values = d;
  // rank(A) > 1 for SO(3); rank(H) > 2 for SO(4).
  out.unique = d[N - 2] > kRankTolRel * d[0];
  return out;
}

}  // namespace

template <int N>
SpecialOrthogonal<N> SpecialOrthogonal<N>::from_matrix(const Matrix& m, double tol) {
  if (!is_valid(m, tol)) {
    throw GeometryError("matrix is not in SO(" + std::to_string(N) + ")");
  }
  return SpecialOrthogonal(m);
}

template <int N>
bool SpecialOrthogonal<N>::is_valid(const Matrix& m, double tol) {
  if (!m.allFinite()) return false;
  const Matrix gram = m * m.transpose() - Matrix::Identity();
  if (gram.cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(m.determinant() - 1.0) <= tol;
}

template class SpecialOrthogonal<3>;
template class SpecialOrthogonal<4>;

UnitQuaternion::UnitQuaternion(double x1, double x2, double x3, double x4)
    : UnitQuaternion(from_coeffs(Vec4(x1, x2, x3, x4))) {}

UnitQuaternion UnitQuaternion::from_coeffs(const Vec4& x) {
  if (!x.allFinite() || std::abs(x.squaredNorm() - 1.0) > kUnitNormTol) {
    throw GeometryError("quaternion is not of unit norm");
  }
  return UnitQuaternion(x);
}

UnitQuaternion UnitQuaternion::normalized(const Vec4& x) {
  const double n = x.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw GeometryError("cannot normalize zero quaternion");
  return UnitQuaternion(Vec4(x / n));
}

Mat3 hat(const Vec3& a) {
  Mat3 m;
  m << 0.0, -a[2], a[1],
       a[2], 0.0, -a[0],
      -a[1], a[0], 0.0;
  return m;
}

Vec3 vee(const Mat3& skew) { return Vec3(skew(2, 1), skew(0, 2), skew(1, 0)); }

Rotation3 exp_so3(const Vec3& a) {
  const double theta2 = a.squaredNorm();
  const double theta = std::sqrt(theta2);
  double sinc;
  double cosc;  // (1 - cos x) / x^2
  if (theta < kSmallAngle) {
    sinc = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0;
    cosc = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
  } else {
    sinc = std::sin(theta) / theta;
    cosc = (1.0 - std::cos(theta)) / theta2;
  }
  const Mat3 w = hat(a);
  return Rotation3::unchecked(Mat3::Identity() + sinc * w + cosc * w * w);
}

double rotation_angle(const Rotation3& r) {
  const Mat3& m = r.matrix();
  const Vec3 w(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
  const double c = std::clamp((m.trace() - 1.0) / 2.0, -1.0, 1.0);
  // |w| = 2 sin(theta); atan2 keeps full precision near 0 and pi.
  return std::atan2(0.5 * w.norm(), c);
}

bool on_cut_locus(const Rotation3& r, double tol) {
  return std::numbers::pi - rotation_angle(r) <= tol;
}

Vec3 log_so3(const Rotation3& r) {
  const Mat3& m = r.matrix();
  const Vec3 w(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
  const double theta = rotation_angle(r);

  if (theta < kSmallAngle) {
    const double t2 = theta * theta;
    return 0.5 * (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0) * w;
  }
  if (theta < std::numbers::pi - kNearPi) {
    return (theta / (2.0 * std::sin(theta))) * w;
  }

  // Near pi the skew part vanishes; n n^T = (S - cos(theta) I) / (1 - cos(theta)).
  const double c = std::cos(theta);
  const Mat3 sym = 0.5 * (m + m.transpose());
  const Mat3 nnt = (sym - c * Mat3::Identity()) / (1.0 - c);
  int k = 0;
  nnt.diagonal().maxCoeff(&k);
  Vec3 axis = nnt.col(k) / std::sqrt(std::max(nnt(k, k), 1e-300));
  axis.normalize();
  const double orient = axis.dot(w);
  if (orient < 0.0) {
    axis = -axis;
  } else if (orient == 0.0) {
    for (int i = 0; i < 3; ++i) {
      if (axis[i] != 0.0) {
        if (axis[i] < 0.0) axis = -axis;
        break;
      }
    }
  }
  return theta * axis;
}

double geo_dist(const Rotation3& p, const Rotation3& q) {
  const double half = rescaled_norm(p.matrix() - q.matrix()) / 2.0;
  if (half > 1.0) {
    if (half > 1.0 + 1e-9) throw GeometryError("geo_dist: arguments are not rotations");
    return std::numbers::pi;
  }
  return 2.0 * std::asin(half);
}

Projection3 project_so3(const Mat3& a) {
  Projection3 out = project_impl<3>(a);
  if (!out.unique) {
    throw GeometryError("project_so3 undefined: rank <= 1 (second singular value " +
                        std::to_string(out.singular_values[1]) + ")");
  }
  return out;
}
Projection4 project_so4(const Mat4& a) { return project_impl<4>(a); }

UnitQuaternion quat_mul(const UnitQuaternion& p, const UnitQuaternion& q) {
  const Vec4& a = p.coeffs();
  const Vec4& b = q.coeffs();
  const Vec4 r(a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
               a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
               a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
               a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]);
  return UnitQuaternion::normalized(r);
}

Rotation3 quat_to_rot(const UnitQuaternion& q) {
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  Mat3 m;
  m << 1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y),
       2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x),
       2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y);
  return Rotation3::unchecked(m);
}

UnitQuaternion rot_to_quat(const Rotation3& r) {
  const Mat3& m = r.matrix();
  const double tr = m.trace();
  Vec4 q;
  int k = 0;
  const double diag_max = m.diagonal().maxCoeff(&k);
  if (tr >= diag_max) {
    const double s = 2.0 * std::sqrt(1.0 + tr);
    q << 0.25 * s, (m(2, 1) - m(1, 2)) / s, (m(0, 2) - m(2, 0)) / s, (m(1, 0) - m(0, 1)) / s;
  } else if (k == 0) {
    const double s = 2.0 * std::sqrt(1.0 + m(0, 0) - m(1, 1) - m(2, 2));
    q << (m(2, 1) - m(1, 2)) / s, 0.25 * s, (m(0, 1) + m(1, 0)) / s, (m(0, 2) + m(2, 0)) / s;
  } else if (k == 1) {
    const double s = 2.0 * std::sqrt(1.0 - m(0, 0) + m(1, 1) - m(2, 2));
    q << (m(0, 2) - m(2, 0)) / s, (m(0, 1) + m(1, 0)) / s, 0.25 * s, (m(1, 2) + m(2, 1)) / s;
  } else {
    const double s = 2.0 * std::sqrt(1.0 - m(0, 0) - m(1, 1) + m(2, 2));
    q << (m(1, 0) - m(0, 1)) / s, (m(0, 2) + m(2, 0)) / s, (m(1, 2) + m(2, 1)) / s, 0.25 * s;
  }
  return UnitQuaternion::normalized(canonical_sign(q));
}

Mat4 left_mult_matrix(const UnitQuaternion& p) {
  Mat4 m;
  m << p[0], -p[1], -p[2], -p[3],
       p[1],  p[0], -p[3],  p[2],
       p[2],  p[3],  p[0], -p[1],
       p[3], -p[2],  p[1],  p[0];
  return m;
}

Mat4 right_mult_matrix(const UnitQuaternion& q) {
  Mat4 m;
  m << q[0], -q[1], -q[2], -q[3],
       q[1],  q[0],  q[3], -q[2],
       q[2], -q[3],  q[0],  q[1],
       q[3],  q[2], -q[1],  q[0];
  return m;
}

Rotation4 quat_pair_to_so4(const UnitQuaternion& p, const UnitQuaternion& q) {
  return Rotation4::unchecked(left_mult_matrix(p) * right_mult_matrix(q));
}

std::pair<UnitQuaternion, UnitQuaternion> so4_to_quat_pair(const Rotation4& r) {
  const Mat4& m = r.matrix();
  // R 1 = p q, and (R v) (p q)^* = p v p^* is the rotation pi(p) on pure quaternions.
  const UnitQuaternion pq = UnitQuaternion::normalized(m.col(0));
  const Vec4 pq_conj = pq.conjugate().coeffs();
  Mat3 conj_p;
  for (int c = 0; c < 3; ++c) {
    const Vec4 image = m.col(c + 1);
    const Vec4 prod(image[0] * pq_conj[0] - image[1] * pq_conj[1] - image[2] * pq_conj[2] -
                        image[3] * pq_conj[3],
                    image[0] * pq_conj[1] + image[1] * pq_conj[0] + image[2] * pq_conj[3] -
                        image[3] * pq_conj[2],
                    image[0] * pq_conj[2] - image[1] * pq_conj[3] + image[2] * pq_conj[0] +
                        image[3] * pq_conj[1],
                    image[0] * pq_conj[3] + image[1] * pq_conj[2] - image[2] * pq_conj[1] +
                        image[3] * pq_conj[0]);
    conj_p.col(c) = prod.tail<3>();
  }
  const UnitQuaternion p = rot_to_quat(project_so3(conj_p).rotation);
  const UnitQuaternion q = quat_mul(p.conjugate(), pq);

  const double residual = (quat_pair_to_so4(p, q).matrix() - m).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-6)) {
    throw GeometryError("so4_to_quat_pair: reconstruction residual " + std::to_string(residual));
  }
  return {p, q};
}

std::pair<Rotation3, Rotation3> so4_to_isometry(const Rotation4& r) {
  const auto [p, q] = so4_to_quat_pair(r);
  return {quat_to_rot(p), quat_to_rot(q)};
}

}  // namespace so3fda
