#pragma once

// Gaussian perturbation models gamma(t) = gamma0(t) Exp(hat(A_t)) and the
// simulation processes used to study them.

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "so3fda/curves.hpp"
#include "so3fda/rng.hpp"

namespace so3fda {

enum class NoiseKind {
  kEps1,  // a1 sin(pi t / 2) + a2 cos(pi t / 2)
  kEps2,  // (sin(4 pi t) + 1.5) sum_i a_i beta_i(t) / sqrt(sum_i beta_i(t))
};

inline constexpr int kEps2Terms = 10;

struct NoiseSpec {
  NoiseKind kind = NoiseKind::kEps1;
  double scale = 1.0;  // multiplier on the unit-variance process, > 0
};

enum class NoiseUnits { kDegrees, kRadians };

/// A generating process A_t: three noise coordinates, optionally mixed by a
/// 3x3 matrix, in the given units.
struct GPSpec {
  RotCurve center;
  std::array<NoiseSpec, 3> noise;
  std::optional<Mat3> mixing;
  NoiseUnits units = NoiseUnits::kDegrees;
};

enum class ModelId { kA0, kB0_5, kB1, kB2, kB2_5 };

inline constexpr std::array<ModelId, 5> kAllModels = {ModelId::kA0, ModelId::kB0_5, ModelId::kB1,
                                                      ModelId::kB2, ModelId::kB2_5};

ModelId parse_model(std::string_view tag);
std::string_view to_string(ModelId id);
/// Bump height lambda of the model's center curve.
double model_lambda(ModelId id);

// Noise processes. The *_path overloads evaluate the expansion for given
// coefficients; sample_* draw the coefficients as independent standard normals.

std::vector<double> eps1_path(const TimeGrid& grid, double a1, double a2);
std::vector<double> eps2_path(const TimeGrid& grid, std::span<const double, kEps2Terms> a);
std::vector<double> sample_eps1(const TimeGrid& grid, CounterRng& rng);
std::vector<double> sample_eps2(const TimeGrid& grid, CounterRng& rng);

/// beta_i(t) = exp(-(t - (i - 1) / 9)^2 / 0.2), i = 1..10.
double eps2_basis(int i, double t);
/// Pointwise variance of eps2 at t.
double eps2_variance(double t);

/// Euler angles (degrees) of the center curve with bump height lambda.
EulerAngles center_angles(double lambda, double t);
RotCurve center_curve(double lambda, const TimeGrid& grid,
                      EulerConvention convention = kDefaultEulerConvention);

/// Lower-triangular mixing matrix of the B models.
Mat3 b_model_mixing();

GPSpec make_model(ModelId id, const TimeGrid& grid, double noise_scale = 1.0,
                  EulerConvention convention = kDefaultEulerConvention);

/// The generating process A(t_k), after scaling, mixing and unit conversion,
/// as radians.
std::vector<Vec3> sample_generating_process(const GPSpec& spec, CounterRng& rng);

/// center[k] exp(hat(noise[k])), noise in radians.
RotCurve perturb(const RotCurve& center, std::span<const Vec3> noise);

RotCurve sample_gp(const GPSpec& spec, CounterRng& rng);

/// n independent draws; draw i uses rng.substream(i).
std::vector<RotCurve> sample_gp(const GPSpec& spec, std::size_t n, const CounterRng& rng);

struct TwoSidedDraw {
  RotCurve curve;
  /// max_t |log(center^T curve) - (center^T C_t + D_t)|.
  double residual_norm;
};

/// Exp(hat C_t) center(t) Exp(hat D_t) with C, D independent eps1 triples
/// scaled by sigma (radians). Throws GeometryError on a cut-locus logarithm.
TwoSidedDraw sample_two_sided_gp(const RotCurve& center, double sigma, CounterRng& rng);
TwoSidedDraw two_sided_gp(const RotCurve& center, std::span<const Vec3> left,
                          std::span<const Vec3> right);

}  // namespace so3fda
