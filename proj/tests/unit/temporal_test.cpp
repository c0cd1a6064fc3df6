#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "so3fda/estimate.hpp"
#include "so3fda/gpsim.hpp"
#include "so3fda_test/oracles.hpp"

namespace so3fda {
namespace {

constexpr double kPi = std::numbers::pi;

Warp sine_warp(const TimeGrid& g, double amp) {
  std::vector<double> img;
  for (std::size_t k = 0; k < g.size(); ++k) img.push_back(g[k] + amp * std::sin(2 * kPi * g[k]));
  img.front() = 0.0;
  img.back() = 1.0;
  return Warp(g, img);
}

// Inverse of t + amp sin(2 pi t) at s, by bisection.
double sine_warp_inverse(double s, double amp) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid + amp * std::sin(2 * kPi * mid) < s ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TEST(TemporalAlign, EqualCurvesGiveIdentity) {
  CounterRng rng(1);
  const RotCurve a = testing::random_smooth_curve(TimeGrid(), rng);
  for (const auto v : {LossVariant::kI1, LossVariant::kI2, LossVariant::kImean, LossVariant::kL2Quat}) {
    const TemporalAlignment r = temporal_align_with_cost(a, a, {v, 3});
    EXPECT_LT(r.warp.distance_from_identity(), 1e-15) << to_string(v);
    EXPECT_LT(r.cost, 1e-6);
  }
}

TEST(TemporalAlign, ConstantCurvesTieToIdentity) {
  const RotCurve c = RotCurve::constant(TimeGrid(), euler_to_rot({1, 2, 3}));
  EXPECT_LT(temporal_align(c, c).distance_from_identity(), 1e-15);
}

TEST(TemporalAlign, RecoversKnownWarpOnCenterCurve) {
  const TimeGrid g;
  const double amp = 0.1;
  const RotCurve a = center_curve(2.0, g);
  const RotCurve b = warp_curve(a, sine_warp(g, amp));
  const Warp phi = temporal_align(a, b);
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    err = std::max(err, std::abs(phi(g[k]) - sine_warp_inverse(g[k], amp)));
  }
  EXPECT_LE(err, 3 * 0.01);
}

TEST(TemporalAlign, RecoversKnownWarpFromExactSamples) {
  const TimeGrid g;
  const double amp = 0.1;
  std::vector<Rotation3> bv;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double t = std::clamp(g[k] + amp * std::sin(2 * kPi * g[k]), 0.0, 1.0);
    bv.push_back(euler_to_rot(center_angles(2.0, t)));
  }
  const Warp phi = temporal_align(center_curve(2.0, g), RotCurve(g, bv));
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    err = std::max(err, std::abs(phi(g[k]) - sine_warp_inverse(g[k], amp)));
  }
  EXPECT_LE(err, 3 * 0.01);
}

TEST(TemporalAlign, CostMatchesLossOfWarpedCurve) {
  CounterRng rng(2);
  const TimeGrid g;
  for (int i = 0; i < 5; ++i) {
    const RotCurve a = testing::random_smooth_curve(g, rng), b = testing::random_smooth_curve(g, rng);
    for (const auto v : {LossVariant::kI1, LossVariant::kI2, LossVariant::kImean}) {
      const TemporalAlignment r = temporal_align_with_cost(a, b, {v, 3});
      EXPECT_NEAR(r.cost, loss(a, warp_curve(b, r.warp), v), 1e-9);
    }
  }
}

TEST(TemporalAlign, NeverIncreasesLoss) {
  CounterRng rng(3);
  const TimeGrid g;
  for (int i = 0; i < 10; ++i) {
    const RotCurve a = testing::random_smooth_curve(g, rng), b = testing::random_smooth_curve(g, rng);
    for (const auto v : {LossVariant::kI1, LossVariant::kI2, LossVariant::kImean, LossVariant::kL2Quat}) {
      const Warp phi = temporal_align(a, b, {v, 3});
      EXPECT_LE(loss(a, warp_curve(b, phi), v), loss(a, b, v) + 1e-12) << to_string(v);
    }
  }
}

TEST(TemporalAlign, WarpIsValidForEveryWindow) {
  CounterRng rng(4);
  const TimeGrid g = TimeGrid::uniform(31);
  const RotCurve a = testing::random_smooth_curve(g, rng), b = testing::random_smooth_curve(g, rng);
  for (int w = 1; w <= 4; ++w) {
    const Warp phi = temporal_align(a, b, {LossVariant::kImean, w});
    EXPECT_EQ(phi.image().front(), 0.0);
    EXPECT_EQ(phi.image().back(), 1.0);
    if (w == 1) {
      EXPECT_EQ(phi.distance_from_identity(), 0.0);
    }
  }
  EXPECT_THROW(temporal_align(a, b, {LossVariant::kImean, 0}), Error);
}

TEST(TemporalAlign, LargerWindowNeverCostsMore) {
  CounterRng rng(5);
  const TimeGrid g = TimeGrid::uniform(41);
  const RotCurve a = testing::random_smooth_curve(g, rng), b = testing::random_smooth_curve(g, rng);
  double prev = std::numeric_limits<double>::infinity();
  for (int w = 1; w <= 4; ++w) {
    const double c = temporal_align_with_cost(a, b, {LossVariant::kImean, w}).cost;
    EXPECT_LE(c, prev + 1e-12);
    prev = c;
  }
}

TEST(TemporalAlign, GridMismatch) {
  const RotCurve a = RotCurve::constant(TimeGrid::uniform(5), Rotation3());
  const RotCurve b = RotCurve::constant(TimeGrid::uniform(7), Rotation3());
  EXPECT_THROW(temporal_align(a, b), GridMismatchError);
}

}  // namespace
}  // namespace so3fda
