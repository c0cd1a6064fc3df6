#pragma once

// Center-curve estimation, loss functions and registration.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "so3fda/curves.hpp"

namespace so3fda {

// --- Pointwise extrinsic mean ------------------------------------------------

struct PemResult {
  RotCurve curve;
  std::vector<bool> unique;
  /// Smallest second singular value of the Euclidean mean over the grid.
  double min_second_singular = 0.0;
};

/// Projects the entrywise Euclidean average onto SO(3) at each grid point.
/// Throws PemUndefinedError listing the points where the mean is not unique.
PemResult pem(std::span<const RotCurve> sample);

/// Same, from precomputed Euclidean means (one per grid point).
PemResult pem_from_means(const TimeGrid& grid, std::span<const Mat3> means);

// --- Losses ------------------------------------------------------------------

enum class LossVariant {
  kI1,     // length(a b^-1)
  kI2,     // length(a^-1 b)
  kImean,  // average of the two
  kL2Quat, // integrated squared distance between quaternion lifts, sign-minimized
};

LossVariant parse_loss(std::string_view tag);
std::string_view to_string(LossVariant v);
bool is_intrinsic(LossVariant v);

/// Intrinsic length loss; throws std::invalid_argument for kL2Quat.
double loss_intrinsic(const RotCurve& a, const RotCurve& b, LossVariant variant);
double loss_l2quat(const RotCurve& a, const RotCurve& b);
/// Dispatches on the variant.
double loss(const RotCurve& a, const RotCurve& b, LossVariant variant);

/// Trapezoid weights of a grid.
std::vector<double> trapezoid_weights(const TimeGrid& grid);

// --- Spatial registration ----------------------------------------------------

/// Trapezoid-rule integral of b(t) a(t)^T.
Mat4 h_matrix(const QuatCurve& a, const QuatCurve& b);

struct AlignResult {
  Rotation3 p;
  Rotation3 q;
  std::optional<Warp> warp;
  bool unique = true;
  std::size_t iterations = 0;
  bool converged = false;
};

/// (P, Q) minimizing loss_l2quat(P a Q, b), from an SVD of h_matrix of the
/// lifts. unique is false when rank(H) <= 2 numerically.
AlignResult spatial_align(const RotCurve& a, const RotCurve& b);

// --- Temporal registration ---------------------------------------------------

struct TemporalOptions {
  LossVariant variant = LossVariant::kImean;
  /// Lattice steps (u, v) with 1 <= u, v <= slope_window.
  int slope_window = 3;
};

struct TemporalAlignment {
  Warp warp;
  /// Discretized loss of (a, b o warp).
  double cost;
};

/// Dynamic program over monotone lattice paths for argmin_phi loss(a, b o phi).
TemporalAlignment temporal_align_with_cost(const RotCurve& a, const RotCurve& b,
                                           const TemporalOptions& opts = {});
Warp temporal_align(const RotCurve& a, const RotCurve& b, const TemporalOptions& opts = {});

// --- Iterated sample alignment -----------------------------------------------

struct SampleAlignOptions {
  bool use_spatial = true;
  bool use_temporal = true;
  std::size_t max_iter = 20;
  /// Stop once d(P, I) + d(Q, I) + sup|phi - id| of an update falls below tol.
  double tol = 1e-3;
  TemporalOptions temporal;
};

struct SampleAlignment {
  std::vector<RotCurve> aligned;
  AlignResult transform;
};

/// Moves chi1 onto chi2 by alternating spatial and temporal registration of
/// the sample means. The returned transform maps each original curve c of
/// chi1 to P (c o warp) Q.
SampleAlignment sample_align(std::span<const RotCurve> chi1, std::span<const RotCurve> chi2,
                             const SampleAlignOptions& opts = {});

/// Applies an accumulated transform to a sample.
std::vector<RotCurve> apply_transform(std::span<const RotCurve> sample, const AlignResult& t);

}  // namespace so3fda
