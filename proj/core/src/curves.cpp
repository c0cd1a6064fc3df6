#include "so3fda/curves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace so3fda {

namespace {

constexpr double kEndpointTol = 1e-12;

Rotation3 axis_rotation(int axis, double degrees) {
  Vec3 a = Vec3::Zero();
  a[axis] = degrees * std::numbers::pi / 180.0;
  return exp_so3(a);
}

double deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace

// --- TimeGrid -------------------------------------------------------------

TimeGrid::TimeGrid(std::vector<double> t) : t_(std::move(t)) {
  if (t_.size() < 2) throw Error("time grid needs at least two points");
  if (t_.front() != 0.0 || t_.back() != 1.0) throw Error("time grid must start at 0 and end at 1");
  for (std::size_t k = 1; k < t_.size(); ++k) {
    if (!(t_[k] > t_[k - 1])) {
      throw Error("time grid is not strictly increasing at index " + std::to_string(k));
    }
  }
}

TimeGrid TimeGrid::uniform(std::size_t n_points) {
  if (n_points < 2) throw Error("time grid needs at least two points");
  std::vector<double> t(n_points);
  const double denom = static_cast<double>(n_points - 1);
  for (std::size_t k = 0; k < n_points; ++k) t[k] = static_cast<double>(k) / denom;
  return TimeGrid(std::move(t));
}

std::size_t TimeGrid::interval(double s) const {
  s = std::clamp(s, 0.0, 1.0);
  const auto it = std::upper_bound(t_.begin(), t_.end(), s);
  const auto k = static_cast<std::size_t>(std::distance(t_.begin(), it));
  return std::min(k == 0 ? 0 : k - 1, t_.size() - 2);
}

void require_same_grid(const TimeGrid& a, const TimeGrid& b, std::string_view context) {
  if (!(a == b)) throw GridMismatchError(std::string(context) + ": curves live on different time grids");
}

// --- RotCurve / QuatCurve -------------------------------------------------

RotCurve::RotCurve(TimeGrid grid, std::vector<Rotation3> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw Error("curve: number of values does not match grid");
  for (std::size_t k = 1; k < values_.size(); ++k) {
    if (!(geo_dist(values_[k - 1], values_[k]) < std::numbers::pi / 2.0)) {
      throw Error("curve: consecutive samples " + std::to_string(k - 1) + " and " +
                  std::to_string(k) + " are at least pi/2 apart");
    }
  }
}

RotCurve RotCurve::constant(const TimeGrid& grid, const Rotation3& r) {
  return RotCurve(grid, std::vector<Rotation3>(grid.size(), r));
}

QuatCurve::QuatCurve(TimeGrid grid, std::vector<UnitQuaternion> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw Error("quaternion curve: size does not match grid");
  for (std::size_t k = 1; k < values_.size(); ++k) {
    if (!(values_[k - 1].dot(values_[k]) > 0.0)) {
      throw Error("quaternion curve is not sign coherent at index " + std::to_string(k));
    }
  }
}

QuatCurve QuatCurve::negated() const {
  std::vector<UnitQuaternion> v;
  v.reserve(values_.size());
  for (const auto& q : values_) v.push_back(-q);
  return QuatCurve(grid_, std::move(v));
}

// --- Warp -----------------------------------------------------------------

Warp::Warp(TimeGrid grid, std::vector<double> image)
    : grid_(std::move(grid)), image_(std::move(image)) {
  if (image_.size() != grid_.size()) throw Error("warp: image size does not match grid");
  if (std::abs(image_.front()) > kEndpointTol || std::abs(image_.back() - 1.0) > kEndpointTol) {
    throw Error("warp: image must start at 0 and end at 1");
  }
  image_.front() = 0.0;
  image_.back() = 1.0;
  for (std::size_t k = 1; k < image_.size(); ++k) {
    if (!(image_[k] > image_[k - 1])) {
      throw Error("warp: image is not strictly increasing at index " + std::to_string(k));
    }
  }
}

Warp Warp::identity(const TimeGrid& grid) {
  return Warp(grid, std::vector<double>(grid.values().begin(), grid.values().end()));
}

double Warp::operator()(double t) const {
  const std::size_t k = grid_.interval(t);
  const double t0 = grid_[k];
  const double t1 = grid_[k + 1];
  const double f = (std::clamp(t, 0.0, 1.0) - t0) / (t1 - t0);
  return image_[k] + f * (image_[k + 1] - image_[k]);
}

double Warp::distance_from_identity() const {
  double d = 0.0;
  for (std::size_t k = 0; k < image_.size(); ++k) d = std::max(d, std::abs(image_[k] - grid_[k]));
  return d;
}

Warp compose(const Warp& outer, const Warp& inner) {
  std::vector<double> image(inner.image().size());
  for (std::size_t k = 0; k < image.size(); ++k) image[k] = outer(inner.image()[k]);
  return Warp(inner.grid(), std::move(image));
}

Warp inverse(const Warp& w) {
  const TimeGrid& g = w.grid();
  const auto& img = w.image();
  std::vector<double> out(g.size());
  std::size_t j = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double y = g[k];
    while (j + 2 < img.size() && img[j + 1] < y) ++j;
    const double f = (y - img[j]) / (img[j + 1] - img[j]);
    out[k] = g[j] + std::clamp(f, 0.0, 1.0) * (g[j + 1] - g[j]);
  }
  return Warp(g, std::move(out));
}

double sup_distance(const Warp& a, const Warp& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.grid().size(); ++k) {
    const double t = a.grid()[k];
    d = std::max(d, std::abs(a.image()[k] - b(t)));
  }
  return d;
}

// --- Interpolation --------------------------------------------------------

GeodesicInterpolator::GeodesicInterpolator(const RotCurve& c) : curve_(c) {
  tangents_.reserve(c.size() - 1);
  for (std::size_t k = 0; k + 1 < c.size(); ++k) {
    tangents_.push_back(log_so3(c[k].transpose() * c[k + 1]));
  }
}

Rotation3 GeodesicInterpolator::at(std::size_t k, double f) const {
  if (f <= 0.0) return curve_[k];
  if (f >= 1.0) return curve_[k + 1];
  return curve_[k] * exp_so3(f * tangents_[k]);
}

Rotation3 GeodesicInterpolator::operator()(double s) const {
  const TimeGrid& g = curve_.grid();
  const std::size_t k = g.interval(s);
  const double f = (std::clamp(s, 0.0, 1.0) - g[k]) / (g[k + 1] - g[k]);
  return at(k, f);
}

// --- Operations -----------------------------------------------------------

QuatCurve lift(const RotCurve& c) {
  std::vector<UnitQuaternion> q;
  q.reserve(c.size());
  q.push_back(rot_to_quat(c[0]));
  for (std::size_t k = 1; k < c.size(); ++k) {
    if (!(geo_dist(c[k - 1], c[k]) < std::numbers::pi / 2.0)) {
      throw LiftError("lift: samples too far apart at index " + std::to_string(k), k);
    }
    UnitQuaternion next = rot_to_quat(c[k]);
    if (next.dot(q.back()) < 0.0) next = -next;
    q.push_back(next);
  }
  return QuatCurve(c.grid(), std::move(q));
}

RotCurve act_isometry(const Rotation3& p, const Rotation3& q, const RotCurve& c) {
  std::vector<Rotation3> v;
  v.reserve(c.size());
  for (const auto& r : c.values()) v.push_back(p * r * q);
  return RotCurve(c.grid(), std::move(v));
}

std::vector<RotCurve> act_isometry(const Rotation3& p, const Rotation3& q,
                                   std::span<const RotCurve> sample) {
  std::vector<RotCurve> out;
  out.reserve(sample.size());
  for (const auto& c : sample) out.push_back(act_isometry(p, q, c));
  return out;
}

RotCurve warp_curve(const RotCurve& c, const Warp& w) {
  require_same_grid(c.grid(), w.grid(), "warp_curve");
  const GeodesicInterpolator interp(c);
  std::vector<Rotation3> v;
  v.reserve(c.size());
  for (const double s : w.image()) v.push_back(interp(s));
  return RotCurve(c.grid(), std::move(v));
}

std::vector<RotCurve> warp_curve(std::span<const RotCurve> sample, const Warp& w) {
  std::vector<RotCurve> out;
  out.reserve(sample.size());
  for (const auto& c : sample) out.push_back(warp_curve(c, w));
  return out;
}

RotCurve resample(const RotCurve& c, const TimeGrid& grid) {
  if (c.grid() == grid) return c;
  const GeodesicInterpolator interp(c);
  std::vector<Rotation3> v;
  v.reserve(grid.size());
  for (const double s : grid.values()) v.push_back(interp(s));
  return RotCurve(grid, std::move(v));
}

double curve_length(const RotCurve& c) {
  double len = 0.0;
  for (std::size_t k = 1; k < c.size(); ++k) len += geo_dist(c[k - 1], c[k]);
  return len;
}

RotCurve relative_curve(const RotCurve& a, const RotCurve& b, Side side) {
  require_same_grid(a.grid(), b.grid(), "relative_curve");
  std::vector<Rotation3> v;
  v.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    v.push_back(side == Side::kRight ? a[k] * b[k].transpose() : a[k].transpose() * b[k]);
  }
  return RotCurve(a.grid(), std::move(v));
}

// --- Euler angles ---------------------------------------------------------

EulerConvention parse_euler_convention(std::string_view tag) {
  if (tag == "xyz") return EulerConvention::kXYZ;
  if (tag == "zyx") return EulerConvention::kZYX;
  throw Error("unknown Euler convention '" + std::string(tag) + "' (expected xyz or zyx)");
}

std::string_view to_string(EulerConvention c) {
  return c == EulerConvention::kXYZ ? "xyz" : "zyx";
}

Rotation3 euler_to_rot(const EulerAngles& e, EulerConvention c) {
  const Rotation3 rx = axis_rotation(0, e.ax);
  const Rotation3 ry = axis_rotation(1, e.ay);
  const Rotation3 rz = axis_rotation(2, e.az);
  return c == EulerConvention::kXYZ ? rx * ry * rz : rz * ry * rx;
}

EulerAngles rot_to_euler(const Rotation3& r, EulerConvention c) {
  const Mat3& m = r.matrix();
  EulerAngles e;
  if (c == EulerConvention::kXYZ) {
    // Row 0 of R_x R_y R_z is (cy cz, -cy sz, sy).
    e.ay = deg(std::atan2(m(0, 2), std::hypot(m(0, 0), m(0, 1))));
    e.ax = deg(std::atan2(-m(1, 2), m(2, 2)));
    e.az = deg(std::atan2(-m(0, 1), m(0, 0)));
  } else {
    // Row 2 of R_z R_y R_x is (-sy, cy sx, cy cx).
    e.ay = deg(std::atan2(-m(2, 0), std::hypot(m(2, 1), m(2, 2))));
    e.ax = deg(std::atan2(m(2, 1), m(2, 2)));
    e.az = deg(std::atan2(m(1, 0), m(0, 0)));
  }
  if (90.0 - std::abs(e.ay) <= 1e-8) throw GeometryError("rot_to_euler: gimbal lock");
  return e;
}

}  // namespace so3fda
