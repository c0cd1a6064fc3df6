#include "so3fda/gpsim.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace so3fda {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

ModelId parse_model(std::string_view tag) {
  if (tag == "A0") return ModelId::kA0;
  if (tag == "B0.5") return ModelId::kB0_5;
  if (tag == "B1") return ModelId::kB1;
  if (tag == "B2") return ModelId::kB2;
  if (tag == "B2.5") return ModelId::kB2_5;
  throw Error("unknown model '" + std::string(tag) + "' (expected A0, B0.5, B1, B2, B2.5)");
}

std::string_view to_string(ModelId id) {
  switch (id) {
    case ModelId::kA0: return "A0";
    case ModelId::kB0_5: return "B0.5";
    case ModelId::kB1: return "B1";
    case ModelId::kB2: return "B2";
    case ModelId::kB2_5: return "B2.5";
  }
  return "?";
}

double model_lambda(ModelId id) {
  switch (id) {
    case ModelId::kA0: return 0.0;
    case ModelId::kB0_5: return 0.5;
    case ModelId::kB1: return 1.0;
    case ModelId::kB2: return 2.0;
    case ModelId::kB2_5: return 2.5;
  }
  return 0.0;
}

std::vector<double> eps1_path(const TimeGrid& grid, double a1, double a2) {
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    out[k] = a1 * std::sin(kPi * t / 2.0) + a2 * std::cos(kPi * t / 2.0);
  }
  return out;
}

double eps2_basis(int i, double t) {
  const double c = static_cast<double>(i - 1) / 9.0;
  return std::exp(-(t - c) * (t - c) / 0.2);
}

std::vector<double> eps2_path(const TimeGrid& grid, std::span<const double, kEps2Terms> a) {
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    double num = 0.0;
    double den = 0.0;
    for (int i = 1; i <= kEps2Terms; ++i) {
      const double b = eps2_basis(i, t);
      num += a[i - 1] * b;
      den += b;
    }
    out[k] = (std::sin(4.0 * kPi * t) + 1.5) * num / std::sqrt(den);
  }
  return out;
}

double eps2_variance(double t) {
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 1; i <= kEps2Terms; ++i) {
    const double b = eps2_basis(i, t);
    sum += b;
    sum_sq += b * b;
  }
  const double env = std::sin(4.0 * kPi * t) + 1.5;
  return env * env * sum_sq / sum;
}

std::vector<double> sample_eps1(const TimeGrid& grid, CounterRng& rng) {
  const double a1 = rng.normal();
  const double a2 = rng.normal();
  return eps1_path(grid, a1, a2);
}

std::vector<double> sample_eps2(const TimeGrid& grid, CounterRng& rng) {
  std::array<double, kEps2Terms> a{};
  for (double& x : a) x = rng.normal();
  return eps2_path(grid, a);
}

EulerAngles center_angles(double lambda, double t) {
  const double z = (t - 0.5) / 0.08;
  const double bump = std::exp(-0.5 * z * z) / (0.08 * std::sqrt(2.0 * kPi));
  EulerAngles e;
  e.ax = 80.0 * t * t - 80.0 * t + 20.0 + lambda * bump - 35.0;
  e.ay = 70.0 * t * std::sin(4.0 * kPi * std::pow(t, 0.7)) + 5.0;
  e.az = 10.0 * std::cos(13.0 * kPi);
  return e;
}

RotCurve center_curve(double lambda, const TimeGrid& grid, EulerConvention convention) {
  std::vector<Rotation3> v;
  v.reserve(grid.size());
  for (const double t : grid.values()) v.push_back(euler_to_rot(center_angles(lambda, t), convention));
  return RotCurve(grid, std::move(v));
}

Mat3 b_model_mixing() {
  const double r3 = 1.0 / std::sqrt(3.0);
  Mat3 m;
  m << 1.0, 0.0, 0.0,
       0.5, 0.5, 0.0,
       r3, r3, r3;
  return m;
}

GPSpec make_model(ModelId id, const TimeGrid& grid, double noise_scale, EulerConvention convention) {
  if (!(noise_scale > 0.0)) throw Error("noise scale must be positive");
  const bool is_a = id == ModelId::kA0;
  const NoiseSpec noise{is_a ? NoiseKind::kEps1 : NoiseKind::kEps2, noise_scale};
  GPSpec spec{center_curve(model_lambda(id), grid, convention), {noise, noise, noise}, std::nullopt,
              NoiseUnits::kDegrees};
  if (!is_a) spec.mixing = b_model_mixing();
  return spec;
}

std::vector<Vec3> sample_generating_process(const GPSpec& spec, CounterRng& rng) {
  const TimeGrid& grid = spec.center.grid();
  std::array<std::vector<double>, 3> coords;
  for (int i = 0; i < 3; ++i) {
    const NoiseSpec& n = spec.noise[i];
    if (!(n.scale > 0.0)) throw Error("noise scale must be positive");
    coords[i] = n.kind == NoiseKind::kEps1 ? sample_eps1(grid, rng) : sample_eps2(grid, rng);
    for (double& x : coords[i]) x *= n.scale;
  }
  const double unit = spec.units == NoiseUnits::kDegrees ? kPi / 180.0 : 1.0;
  std::vector<Vec3> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    Vec3 a(coords[0][k], coords[1][k], coords[2][k]);
    if (spec.mixing) a = *spec.mixing * a;
    out[k] = unit * a;
  }
  return out;
}

RotCurve perturb(const RotCurve& center, std::span<const Vec3> noise) {
  if (noise.size() != center.size()) throw Error("perturb: noise path does not match grid");
  std::vector<Rotation3> v;
  v.reserve(center.size());
  for (std::size_t k = 0; k < center.size(); ++k) v.push_back(center[k] * exp_so3(noise[k]));
  return RotCurve(center.grid(), std::move(v));
}

RotCurve sample_gp(const GPSpec& spec, CounterRng& rng) {
  const auto noise = sample_generating_process(spec, rng);
  return perturb(spec.center, noise);
}

std::vector<RotCurve> sample_gp(const GPSpec& spec, std::size_t n, const CounterRng& rng) {
  std::vector<RotCurve> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng child = rng.substream(i);
    out.push_back(sample_gp(spec, child));
  }
  return out;
}

TwoSidedDraw two_sided_gp(const RotCurve& center, std::span<const Vec3> left,
                          std::span<const Vec3> right) {
  if (left.size() != center.size() || right.size() != center.size()) {
    throw Error("two_sided_gp: noise paths do not match grid");
  }
  std::vector<Rotation3> v;
  v.reserve(center.size());
  double residual = 0.0;
  for (std::size_t k = 0; k < center.size(); ++k) {
    const Rotation3 value = exp_so3(left[k]) * center[k] * exp_so3(right[k]);
    const Rotation3 rel = center[k].transpose() * value;
    if (on_cut_locus(rel)) throw GeometryError("two_sided_gp: logarithm on the cut locus");
    const Vec3 linear = center[k].transpose() * left[k] + right[k];
    residual = std::max(residual, (log_so3(rel) - linear).norm());
    v.push_back(value);
  }
  return {RotCurve(center.grid(), std::move(v)), residual};
}

TwoSidedDraw sample_two_sided_gp(const RotCurve& center, double sigma, CounterRng& rng) {
  if (!(sigma > 0.0)) throw Error("sample_two_sided_gp: sigma must be positive");
  const TimeGrid& grid = center.grid();
  auto draw_triple = [&] {
    std::array<std::vector<double>, 3> c;
    for (auto& path : c) path = sample_eps1(grid, rng);
    std::vector<Vec3> out(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) out[k] = sigma * Vec3(c[0][k], c[1][k], c[2][k]);
    return out;
  };
  const auto left = draw_triple();
  const auto right = draw_triple();
  return two_sided_gp(center, left, right);
}

}  // namespace so3fda
