#pragma once

// Rotation-valued curves sampled on a time grid over [0, 1], their quaternion
// lifts, the isometry and reparametrization actions, and Euler angles.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "so3fda/liegroup.hpp"

namespace so3fda {

/// Strictly increasing t_0 = 0 < t_1 < ... < t_K = 1.
class TimeGrid {
 public:
  /// Default grid: 101 equidistant points.
  TimeGrid() : TimeGrid(uniform(101)) {}
  explicit TimeGrid(std::vector<double> t);

  static TimeGrid uniform(std::size_t n_points);

  std::size_t size() const { return t_.size(); }
  /// Index of the last knot, K.
  std::size_t last() const { return t_.size() - 1; }
  double operator[](std::size_t k) const { return t_[k]; }
  std::span<const double> values() const { return t_; }

  /// Interval index k with t_k <= s <= t_{k+1}; s is clamped to [0, 1].
  std::size_t interval(double s) const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  std::vector<double> t_;
};

class RotCurve {
 public:
  /// Throws Error unless sizes match and consecutive samples are closer than pi/2.
  RotCurve(TimeGrid grid, std::vector<Rotation3> values);

  static RotCurve constant(const TimeGrid& grid, const Rotation3& r);

  const TimeGrid& grid() const { return grid_; }
  const std::vector<Rotation3>& values() const { return values_; }
  const Rotation3& operator[](std::size_t k) const { return values_[k]; }
  std::size_t size() const { return values_.size(); }

 private:
  TimeGrid grid_;
  std::vector<Rotation3> values_;
};

/// Sign-coherent quaternion curve: consecutive dot products are positive.
class QuatCurve {
 public:
  QuatCurve(TimeGrid grid, std::vector<UnitQuaternion> values);

  const TimeGrid& grid() const { return grid_; }
  const std::vector<UnitQuaternion>& values() const { return values_; }
  const UnitQuaternion& operator[](std::size_t k) const { return values_[k]; }
  std::size_t size() const { return values_.size(); }

  QuatCurve negated() const;

 private:
  TimeGrid grid_;
  std::vector<UnitQuaternion> values_;
};

/// Discrete orientation-preserving reparametrization: knot t_k maps to
/// image[k], linear in between. Image is strictly increasing from 0 to 1.
class Warp {
 public:
  Warp(TimeGrid grid, std::vector<double> image);

  static Warp identity(const TimeGrid& grid);

  const TimeGrid& grid() const { return grid_; }
  const std::vector<double>& image() const { return image_; }

  double operator()(double t) const;

  /// max_k |image[k] - t_k|.
  double distance_from_identity() const;

 private:
  TimeGrid grid_;
  std::vector<double> image_;
};

/// outer o inner, sampled at the knots of inner.
Warp compose(const Warp& outer, const Warp& inner);
/// Knot-wise inverse of a piecewise linear warp.
Warp inverse(const Warp& w);
/// max_k |a(t_k) - b(t_k)| over the knots of a.
double sup_distance(const Warp& a, const Warp& b);

/// Geodesic interpolation R_k exp(f log(R_k^T R_{k+1})) between samples.
class GeodesicInterpolator {
 public:
  explicit GeodesicInterpolator(const RotCurve& c);

  Rotation3 operator()(double s) const;
  /// Point at fraction f in [0, 1] of interval k.
  Rotation3 at(std::size_t k, double f) const;

 private:
  RotCurve curve_;
  std::vector<Vec3> tangents_;
};

// Operations.

/// Continuous lift to the unit quaternions; values[0] follows rot_to_quat's
/// sign convention. Throws LiftError when consecutive samples are >= pi/2 apart.
QuatCurve lift(const RotCurve& c);

/// Pointwise P c(t) Q.
RotCurve act_isometry(const Rotation3& p, const Rotation3& q, const RotCurve& c);
std::vector<RotCurve> act_isometry(const Rotation3& p, const Rotation3& q,
                                   std::span<const RotCurve> sample);

/// c o w on c's grid. The warp must be defined on c's grid.
RotCurve warp_curve(const RotCurve& c, const Warp& w);
std::vector<RotCurve> warp_curve(std::span<const RotCurve> sample, const Warp& w);

/// c sampled at the knots of a new grid by geodesic interpolation.
RotCurve resample(const RotCurve& c, const TimeGrid& grid);

/// Sum of geodesic distances between consecutive samples.
double curve_length(const RotCurve& c);

enum class Side {
  kLeft,   // a^T b
  kRight,  // a b^T
};

/// Pointwise quotient curve; throws GridMismatchError for different grids.
RotCurve relative_curve(const RotCurve& a, const RotCurve& b, Side side);

void require_same_grid(const TimeGrid& a, const TimeGrid& b, std::string_view context);

// Euler angles.

struct EulerAngles {
  double ax = 0.0;  // degrees
  double ay = 0.0;
  double az = 0.0;
};

enum class EulerConvention {
  kXYZ,  // R = R_x(ax) R_y(ay) R_z(az)
  kZYX,  // R = R_z(az) R_y(ay) R_x(ax)
};

inline constexpr EulerConvention kDefaultEulerConvention = EulerConvention::kXYZ;

EulerConvention parse_euler_convention(std::string_view tag);
std::string_view to_string(EulerConvention c);

Rotation3 euler_to_rot(const EulerAngles& e, EulerConvention c = kDefaultEulerConvention);
/// Throws GeometryError when the middle angle is within 1e-8 degrees of +-90.
EulerAngles rot_to_euler(const Rotation3& r, EulerConvention c = kDefaultEulerConvention);

}  // namespace so3fda
