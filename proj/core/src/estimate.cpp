#include "so3fda/estimate.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace so3fda {

PemResult pem_from_means(const TimeGrid& grid, std::span<const Mat3> means) {
  if (means.size() != grid.size()) throw Error("pem: means do not match grid");
  std::vector<Rotation3> values;
  values.reserve(means.size());
  std::vector<bool> unique(means.size(), false);
  std::vector<std::size_t> bad;
  double min_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < means.size(); ++k) {
    try {
      const Projection3 proj = project_so3(means[k]);
      unique[k] = proj.unique;
      min_d2 = std::min(min_d2, proj.singular_values[1]);
      if (!proj.unique) bad.push_back(k);
      values.push_back(proj.rotation);
    } catch (const GeometryError&) {
      min_d2 = 0.0;
      bad.push_back(k);
      values.push_back(Rotation3::identity());
    }
  }
  if (!bad.empty()) {
    std::string msg = "pem: mean is not unique at grid points";
    for (std::size_t i = 0; i < bad.size() && i < 10; ++i) msg += " " + std::to_string(bad[i]);
    if (bad.size() > 10) msg += " ...";
    throw PemUndefinedError(msg, std::move(bad));
  }
  return {RotCurve(grid, std::move(values)), std::move(unique), min_d2};
}

PemResult pem(std::span<const RotCurve> sample) {
  if (sample.empty()) throw Error("pem: empty sample");
  const TimeGrid& grid = sample.front().grid();
  std::vector<Mat3> means(grid.size(), Mat3::Zero());
  for (const auto& c : sample) {
    require_same_grid(grid, c.grid(), "pem");
    for (std::size_t k = 0; k < grid.size(); ++k) means[k] += c[k].matrix();
  }
  const double inv_n = 1.0 / static_cast<double>(sample.size());
  for (auto& m : means) m *= inv_n;
  return pem_from_means(grid, means);
}

LossVariant parse_loss(std::string_view tag) {
  if (tag == "i1") return LossVariant::kI1;
  if (tag == "i2") return LossVariant::kI2;
  if (tag == "imean") return LossVariant::kImean;
  if (tag == "l2quat") return LossVariant::kL2Quat;
  throw Error("unknown loss '" + std::string(tag) + "' (expected i1, i2, imean, l2quat)");
}

std::string_view to_string(LossVariant v) {
  switch (v) {
    case LossVariant::kI1: return "i1";
    case LossVariant::kI2: return "i2";
    case LossVariant::kImean: return "imean";
    case LossVariant::kL2Quat: return "l2quat";
  }
  return "?";
}

bool is_intrinsic(LossVariant v) { return v != LossVariant::kL2Quat; }

double loss_intrinsic(const RotCurve& a, const RotCurve& b, LossVariant variant) {
  switch (variant) {
    case LossVariant::kI1: return curve_length(relative_curve(a, b, Side::kRight));
    case LossVariant::kI2: return curve_length(relative_curve(a, b, Side::kLeft));
    case LossVariant::kImean:
      return 0.5 * (curve_length(relative_curve(a, b, Side::kRight)) +
                    curve_length(relative_curve(a, b, Side::kLeft)));
    case LossVariant::kL2Quat: break;
  }
  throw std::invalid_argument("loss_intrinsic: l2quat is not an intrinsic length loss");
}

std::vector<double> trapezoid_weights(const TimeGrid& grid) {
  const std::size_t n = grid.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double h = 0.5 * (grid[k + 1] - grid[k]);
    w[k] += h;
    w[k + 1] += h;
  }
  return w;
}

double loss_l2quat(const RotCurve& a, const RotCurve& b) {
  require_same_grid(a.grid(), b.grid(), "loss_l2quat");
  const QuatCurve la = lift(a);
  const QuatCurve lb = lift(b);
  const auto w = trapezoid_weights(a.grid());
  double same = 0.0;
  double flipped = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    same += w[k] * (la[k].coeffs() - lb[k].coeffs()).squaredNorm();
    flipped += w[k] * (la[k].coeffs() + lb[k].coeffs()).squaredNorm();
  }
  return std::min(same, flipped);
}

double loss(const RotCurve& a, const RotCurve& b, LossVariant variant) {
  return variant == LossVariant::kL2Quat ? loss_l2quat(a, b) : loss_intrinsic(a, b, variant);
}

Mat4 h_matrix(const QuatCurve& a, const QuatCurve& b) {
  require_same_grid(a.grid(), b.grid(), "h_matrix");
  const auto w = trapezoid_weights(a.grid());
  Mat4 h = Mat4::Zero();
  for (std::size_t k = 0; k < w.size(); ++k) {
    h.noalias() += w[k] * b[k].coeffs() * a[k].coeffs().transpose();
  }
  return h;
}

AlignResult spatial_align(const RotCurve& a, const RotCurve& b) {
  require_same_grid(a.grid(), b.grid(), "spatial_align");
  const Mat4 h = h_matrix(lift(a), lift(b));
  const Projection4 proj = project_so4(h);
  const auto [p, q] = so4_to_isometry(proj.rotation);
  AlignResult out;
  out.p = p;
  out.q = q;
  out.unique = proj.unique;
  out.iterations = 1;
  out.converged = true;
  return out;
}

std::vector<RotCurve> apply_transform(std::span<const RotCurve> sample, const AlignResult& t) {
  std::vector<RotCurve> out;
  out.reserve(sample.size());
  for (const auto& c : sample) {
    out.push_back(act_isometry(t.p, t.q, t.warp ? warp_curve(c, *t.warp) : c));
  }
  return out;
}

SampleAlignment sample_align(std::span<const RotCurve> chi1, std::span<const RotCurve> chi2,
                             const SampleAlignOptions& opts) {
  if (chi1.empty() || chi2.empty()) throw Error("sample_align: empty sample");
  SampleAlignment out;
  out.aligned.assign(chi1.begin(), chi1.end());
  out.transform.converged = true;
  if (!opts.use_spatial && !opts.use_temporal) return out;

  const TimeGrid& grid = chi1.front().grid();
  const RotCurve target = pem(chi2).curve;
  require_same_grid(grid, target.grid(), "sample_align");

  AlignResult& acc = out.transform;
  acc.converged = false;
  if (opts.use_temporal) acc.warp = Warp::identity(grid);

  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    const RotCurve mean1 = pem(out.aligned).curve;
    Rotation3 p;
    Rotation3 q;
    if (opts.use_spatial) {
      const AlignResult s = spatial_align(mean1, target);
      p = s.p;
      q = s.q;
      acc.unique = s.unique;
    }
    double warp_step = 0.0;
    if (opts.use_temporal) {
      const Warp phi = temporal_align(target, act_isometry(p, q, mean1), opts.temporal);
      warp_step = phi.distance_from_identity();
      acc.warp = compose(*acc.warp, phi);
    }
    acc.p = p * acc.p;
    acc.q = acc.q * q;
    acc.iterations = it;
    out.aligned = apply_transform(chi1, acc);

    const double step = geo_dist(p, Rotation3::identity()) + geo_dist(q, Rotation3::identity()) +
                        warp_step;
    if (step < opts.tol) {
      acc.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace so3fda
