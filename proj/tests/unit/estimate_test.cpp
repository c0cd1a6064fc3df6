#include <gtest/gtest.h>

#include <Eigen/SVD>
#include <cmath>
#include <numbers>

#include "so3fda/estimate.hpp"
#include "so3fda/gpsim.hpp"
#include "so3fda_test/oracles.hpp"

namespace so3fda {
namespace {

using testing::random_quaternion;
using testing::random_rotation;
using testing::random_smooth_curve;

constexpr double kPi = std::numbers::pi;

double max_dist(const RotCurve& a, const RotCurve& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, geo_dist(a[k], b[k]));
  return m;
}

const Rotation3 kMisalignP = euler_to_rot({-0.5, 13.0, -9.0});
const Rotation3 kMisalignQ = euler_to_rot({12.0, 0.0, 5.0});

TEST(Pem, SingleCurveIsItself) {
  CounterRng rng(1);
  const RotCurve c = random_smooth_curve(TimeGrid(), rng);
  const std::vector<RotCurve> s = {c};
  const PemResult m = pem(s);
  EXPECT_LT(max_dist(m.curve, c), 1e-12);
  for (const bool u : m.unique) EXPECT_TRUE(u);
}

TEST(Pem, SymmetricPairAveragesToIdentity) {
  const TimeGrid g;
  const std::vector<RotCurve> s = {RotCurve::constant(g, exp_so3(Vec3(0.3, 0, 0))),
                                   RotCurve::constant(g, exp_so3(Vec3(-0.3, 0, 0)))};
  const PemResult m = pem(s);
  EXPECT_LT(max_dist(m.curve, RotCurve::constant(g, Rotation3())), 1e-12);
  // The averaged matrix is diag(1, cos 0.3, cos 0.3); identity maximizes the trace.
  CounterRng rng(2);
  const Mat3 avg = Vec3(1, std::cos(0.3), std::cos(0.3)).asDiagonal();
  EXPECT_LE(testing::brute_force_max_trace(avg, 100'000, rng), avg.trace() + 1e-12);
}

TEST(Pem, UndefinedMeanListsPoints) {
  const TimeGrid g = TimeGrid::uniform(3);
  // Half turns about x and y average to diag(0, 0, -1), rank one.
  const std::vector<RotCurve> s = {RotCurve::constant(g, exp_so3(Vec3(kPi, 0, 0))),
                                   RotCurve::constant(g, exp_so3(Vec3(0, kPi, 0)))};
  try {
    pem(s);
    FAIL() << "expected PemUndefinedError";
  } catch (const PemUndefinedError& e) {
    EXPECT_EQ(e.points(), (std::vector<std::size_t>{0, 1, 2}));
  }
  EXPECT_THROW(pem(std::span<const RotCurve>{}), Error);
}

TEST(Pem, ConsistencyForManyDraws) {
  const GPSpec spec = make_model(ModelId::kA0, TimeGrid());
  const auto s = sample_gp(spec, 500, CounterRng(3));
  EXPECT_LT(max_dist(pem(s).curve, spec.center), 0.03);
}

TEST(Pem, Equivariance) {
  CounterRng rng(4);
  const TimeGrid g;
  std::vector<RotCurve> s;
  for (int i = 0; i < 8; ++i) s.push_back(random_smooth_curve(g, rng, 0.5));
  const Rotation3 p = random_rotation(rng), q = random_rotation(rng);
  const RotCurve lhs = pem(act_isometry(p, q, s)).curve;
  const RotCurve rhs = act_isometry(p, q, pem(s).curve);
  EXPECT_LT(max_dist(lhs, rhs), 1e-7);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_LT((lhs[k].matrix() - rhs[k].matrix()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Pem, CommonWarpCommutesAtGridScale) {
  CounterRng rng(5);
  const TimeGrid g;
  const GPSpec spec = make_model(ModelId::kB1, g);
  const auto s = sample_gp(spec, 10, CounterRng(5));
  std::vector<double> img;
  for (std::size_t k = 0; k < g.size(); ++k) img.push_back(g[k] + 0.05 * std::sin(2 * kPi * g[k]));
  img.back() = 1.0;
  const Warp w(g, img);
  const RotCurve lhs = pem(warp_curve(s, w)).curve;
  const RotCurve rhs = warp_curve(pem(s).curve, w);
  double chord = 0.0;
  for (const auto& c : s)
    for (std::size_t k = 0; k + 1 < c.size(); ++k) chord = std::max(chord, geo_dist(c[k], c[k + 1]));
  EXPECT_LT(max_dist(lhs, rhs), chord * chord);
}

TEST(Loss, Tags) {
  for (const auto v : {LossVariant::kI1, LossVariant::kI2, LossVariant::kImean, LossVariant::kL2Quat})
    EXPECT_EQ(parse_loss(to_string(v)), v);
  EXPECT_THROW(parse_loss("l1"), Error);
  EXPECT_FALSE(is_intrinsic(LossVariant::kL2Quat));
  EXPECT_THROW(loss_intrinsic(RotCurve::constant(TimeGrid(), Rotation3()),
                              RotCurve::constant(TimeGrid(), Rotation3()), LossVariant::kL2Quat),
               std::invalid_argument);
}

TEST(Loss, ZeroOnEqualAndOffsetCurves) {
  CounterRng rng(6);
  const RotCurve c = random_smooth_curve(TimeGrid(), rng);
  const Rotation3 p = random_rotation(rng);
  for (const auto v : {LossVariant::kI1, LossVariant::kI2, LossVariant::kImean})
    EXPECT_LT(loss_intrinsic(c, c, v), 1e-6);
  // length(c (cP)^-1) = length(c P^T c^T) vanishes only on the left quotient:
  // a constant right offset is seen as zero by the a^T b variant.
  EXPECT_LT(loss_intrinsic(c, act_isometry(Rotation3(), p, c), LossVariant::kI2), 1e-6);
  EXPECT_LT(loss_intrinsic(act_isometry(p, Rotation3(), c), c, LossVariant::kI1), 1e-6);
  EXPECT_EQ(loss_l2quat(c, c), 0.0);
}

TEST(Loss, LeftInvarianceOfRightQuotient) {
  CounterRng rng(7);
  const TimeGrid g;
  for (int i = 0; i < 20; ++i) {
    const RotCurve a = random_smooth_curve(g, rng), b = random_smooth_curve(g, rng);
    const Rotation3 p = random_rotation(rng);
    // (P a)(P b)^T = P (a b^T) P^T has the same length as a b^T.
    EXPECT_NEAR(loss_intrinsic(act_isometry(p, Rotation3(), a), act_isometry(p, Rotation3(), b),
                               LossVariant::kI1),
                loss_intrinsic(a, b, LossVariant::kI1), 1e-10);
  }
}

TEST(Loss, Symmetry) {
  CounterRng rng(8);
  const TimeGrid g;
  for (int i = 0; i < 20; ++i) {
    const RotCurve a = random_smooth_curve(g, rng), b = random_smooth_curve(g, rng);
    for (const auto v : {LossVariant::kI1, LossVariant::kI2, LossVariant::kImean, LossVariant::kL2Quat})
      EXPECT_NEAR(loss(a, b, v), loss(b, a, v), 1e-10);
  }
}

TEST(Loss, InvarianceUnderJointAction) {
  CounterRng rng(9);
  const TimeGrid g;
  for (int i = 0; i < 10; ++i) {
    const RotCurve a = random_smooth_curve(g, rng), b = random_smooth_curve(g, rng);
    const Rotation3 p = random_rotation(rng), q = random_rotation(rng);
    std::vector<double> img;
    const double amp = 0.1 * rng.uniform();
    for (std::size_t k = 0; k < g.size(); ++k) img.push_back(g[k] + amp * std::sin(2 * kPi * g[k]) / kPi);
    img.back() = 1.0;
    const Warp w(g, img);
    const RotCurve a2 = act_isometry(p, q, warp_curve(a, w));
    const RotCurve b2 = act_isometry(p, q, warp_curve(b, w));
    double chord = 0.0;
    for (const RotCurve* c : {&a, &b})
      for (std::size_t k = 0; k + 1 < c->size(); ++k)
        chord = std::max(chord, geo_dist((*c)[k], (*c)[k + 1]));
    const double interp_tol = 2.0 * static_cast<double>(g.last()) * chord * chord;
    for (const auto v : {LossVariant::kI1, LossVariant::kI2, LossVariant::kImean})
      EXPECT_NEAR(loss_intrinsic(a2, b2, v), loss_intrinsic(a, b, v), 5 * interp_tol);
  }
}

TEST(Loss, L2QuatHandValues) {
  const TimeGrid g;
  const RotCurve id = RotCurve::constant(g, Rotation3());
  const RotCurve half = RotCurve::constant(g, exp_so3(Vec3(kPi, 0, 0)));
  EXPECT_NEAR(loss_l2quat(id, half), 2.0, 1e-12);
}

TEST(Loss, L2QuatSignInvariance) {
  CounterRng rng(10);
  const TimeGrid g;
  const RotCurve a = random_smooth_curve(g, rng), b = random_smooth_curve(g, rng);
  const QuatCurve la = lift(a), lb = lift(b);
  const auto w = trapezoid_weights(g);
  auto integral = [&](const QuatCurve& x, const QuatCurve& y) {
    double s = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * (x[k].coeffs() - y[k].coeffs()).squaredNorm();
    return s;
  };
  const double expected = std::min(integral(la, lb), integral(la, lb.negated()));
  EXPECT_EQ(loss_l2quat(a, b), expected);
  EXPECT_EQ(std::min(integral(la.negated(), lb), integral(la.negated(), lb.negated())), expected);
}

TEST(HMatrix, ConstantIdentityLifts) {
  const TimeGrid g;
  const QuatCurve a = lift(RotCurve::constant(g, Rotation3()));
  Mat4 e = Mat4::Zero();
  e(0, 0) = 1.0;
  EXPECT_LT((h_matrix(a, a) - e).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(HMatrix, Linearity) {
  CounterRng rng(11);
  const TimeGrid g;
  const QuatCurve a = lift(random_smooth_curve(g, rng));
  const Rotation4 r = quat_pair_to_so4(random_quaternion(rng), random_quaternion(rng));
  std::vector<UnitQuaternion> moved;
  for (const auto& x : a.values()) moved.push_back(UnitQuaternion::normalized(r * x.coeffs()));
  const QuatCurve b(g, moved);
  EXPECT_LT((h_matrix(a, b) - r.matrix() * h_matrix(a, a)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(HMatrix, IsotropicCurveHasEqualSingularValues) {
  // Two circles in orthogonal planes of R^4 have a Gram matrix proportional
  // to the identity.
  const TimeGrid g = TimeGrid::uniform(1001);
  std::vector<Rotation3> v;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double s = 2 * kPi * g[k];
    const Vec4 x(std::cos(s), std::sin(s), std::sin(3 * s), std::cos(3 * s));
    v.push_back(quat_to_rot(UnitQuaternion::normalized(x)));
  }
  const RotCurve a(g, v);
  const Rotation3 p = euler_to_rot({10, 20, 30}), q = euler_to_rot({-5, 40, 7});
  const Mat4 h = h_matrix(lift(a), lift(act_isometry(p, q, a)));
  Eigen::JacobiSVD<Mat4> svd(h);
  const Vec4 s = svd.singularValues();
  EXPECT_GT(s[3] / s[0], 0.9);
}

TEST(SpatialAlign, IdenticalCurvesGiveIdentity) {
  CounterRng rng(12);
  const RotCurve c = random_smooth_curve(TimeGrid(), rng);
  const AlignResult r = spatial_align(c, c);
  EXPECT_TRUE(r.unique);
  EXPECT_LT(geo_dist(r.p, Rotation3()), 1e-8);
  EXPECT_LT(geo_dist(r.q, Rotation3()), 1e-8);
}

TEST(SpatialAlign, RecoversMisalignment) {
  const RotCurve a = center_curve(2.0, TimeGrid());
  const RotCurve b = act_isometry(kMisalignP, kMisalignQ, a);
  const AlignResult r = spatial_align(a, b);
  EXPECT_TRUE(r.unique);
  EXPECT_LT(geo_dist(r.p, kMisalignP), 1e-7);
  EXPECT_LT(geo_dist(r.q, kMisalignQ), 1e-7);
  EXPECT_LT(max_dist(act_isometry(r.p, r.q, a), b), 1e-7);
}

TEST(SpatialAlign, RecoversRandomPairs) {
  CounterRng rng(13);
  for (int i = 0; i < 20; ++i) {
    const RotCurve a = random_smooth_curve(TimeGrid(), rng);
    const Rotation3 p = random_rotation(rng), q = random_rotation(rng);
    const AlignResult r = spatial_align(a, act_isometry(p, q, a));
    EXPECT_LT(max_dist(act_isometry(r.p, r.q, a), act_isometry(p, q, a)), 1e-7);
  }
}

TEST(SpatialAlign, ConstantCurveIsNotUnique) {
  const RotCurve c = RotCurve::constant(TimeGrid(), euler_to_rot({10, 20, 30}));
  EXPECT_FALSE(spatial_align(c, c).unique);
}

TEST(SpatialAlign, InverseAlignment) {
  CounterRng rng(14);
  for (int i = 0; i < 20; ++i) {
    const RotCurve a = random_smooth_curve(TimeGrid(), rng), b = random_smooth_curve(TimeGrid(), rng);
    const AlignResult r = spatial_align(a, b);
    ASSERT_TRUE(r.unique);
    const AlignResult again = spatial_align(act_isometry(r.p, r.q, a), b);
    EXPECT_LT(geo_dist(again.p, Rotation3()), 1e-7);
    EXPECT_LT(geo_dist(again.q, Rotation3()), 1e-7);
  }
}

TEST(SpatialAlign, BeatsRandomCandidates) {
  CounterRng rng(15);
  const TimeGrid g = TimeGrid::uniform(41);
  for (int i = 0; i < 20; ++i) {
    const RotCurve a = random_smooth_curve(g, rng), b = random_smooth_curve(g, rng);
    const AlignResult r = spatial_align(a, b);
    const double best = loss_l2quat(act_isometry(r.p, r.q, a), b);
    for (int j = 0; j < 500; ++j) {
      const double cand = loss_l2quat(act_isometry(random_rotation(rng), random_rotation(rng), a), b);
      ASSERT_GE(cand, best - 1e-9);
    }
  }
}

TEST(SampleAlign, IdenticalSamplesConvergeImmediately) {
  const auto s = sample_gp(make_model(ModelId::kA0, TimeGrid()), 5, CounterRng(16));
  const SampleAlignment r = sample_align(s, s);
  EXPECT_TRUE(r.transform.converged);
  EXPECT_EQ(r.transform.iterations, 1u);
  EXPECT_LT(geo_dist(r.transform.p, Rotation3()), 1e-3);
  EXPECT_LT(geo_dist(r.transform.q, Rotation3()), 1e-3);
  ASSERT_TRUE(r.transform.warp.has_value());
  EXPECT_LT(r.transform.warp->distance_from_identity(), 1e-3);
}

TEST(SampleAlign, AllOptionsOffReturnsInput) {
  const auto s = sample_gp(make_model(ModelId::kA0, TimeGrid()), 3, CounterRng(17));
  const auto t = sample_gp(make_model(ModelId::kB2, TimeGrid()), 3, CounterRng(18));
  SampleAlignOptions opts;
  opts.use_spatial = opts.use_temporal = false;
  const SampleAlignment r = sample_align(s, t, opts);
  EXPECT_EQ(r.transform.iterations, 0u);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(max_dist(r.aligned[i], s[i]), 0.0);
}

TEST(SampleAlign, UndoesMisalignment) {
  const GPSpec spec = make_model(ModelId::kA0, TimeGrid());
  const auto chi2 = sample_gp(spec, 15, CounterRng(19));
  const auto chi1 = act_isometry(kMisalignP, kMisalignQ, sample_gp(spec, 15, CounterRng(20)));
  SampleAlignOptions opts;
  opts.use_temporal = false;
  const SampleAlignment r = sample_align(chi1, chi2, opts);
  EXPECT_TRUE(r.transform.converged);
  EXPECT_LT(max_dist(pem(r.aligned).curve, pem(chi2).curve), 0.05);
  // The accumulated transform is the inverse of the misalignment.
  EXPECT_LT(geo_dist(r.transform.p * kMisalignP, Rotation3()), 0.05);
  EXPECT_LT(geo_dist(kMisalignQ * r.transform.q, Rotation3()), 0.05);
  const auto again = apply_transform(chi1, r.transform);
  for (std::size_t i = 0; i < chi1.size(); ++i) EXPECT_LT(max_dist(again[i], r.aligned[i]), 1e-12);
}

TEST(SampleAlign, WithTemporalStepReducesLoss) {
  const GPSpec spec = make_model(ModelId::kB2, TimeGrid());
  const auto chi2 = sample_gp(spec, 5, CounterRng(21));
  const auto raw = sample_gp(spec, 5, CounterRng(22));
  const TimeGrid& g = spec.center.grid();
  std::vector<double> img;
  for (std::size_t k = 0; k < g.size(); ++k) img.push_back(g[k] + 0.05 * std::sin(2 * kPi * g[k]));
  img.back() = 1.0;
  const auto chi1 = act_isometry(kMisalignP, kMisalignQ, warp_curve(raw, Warp(g, img)));
  const SampleAlignment r = sample_align(chi1, chi2);
  const double before = loss(pem(chi1).curve, pem(chi2).curve, LossVariant::kImean);
  const double after = loss(pem(r.aligned).curve, pem(chi2).curve, LossVariant::kImean);
  EXPECT_LT(after, 0.5 * before);
}

}  // namespace
}  // namespace so3fda
