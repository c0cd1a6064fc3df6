#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "so3fda/estimate.hpp"

namespace so3fda {

namespace {

struct Step {
  int u;  // advance on the grid of a
  int v;  // advance on the grid of b
};

// Coprime steps within the slope window, ordered by closeness to the
// diagonal; ties in the dynamic program resolve towards earlier steps.
std::vector<Step> lattice_steps(int window) {
  if (window < 1) throw Error("temporal_align: slope window must be >= 1");
  std::vector<Step> steps;
  for (int u = 1; u <= window; ++u) {
    for (int v = 1; v <= window; ++v) {
      if (std::gcd(u, v) == 1) steps.push_back({u, v});
    }
  }
  std::stable_sort(steps.begin(), steps.end(), [](const Step& x, const Step& y) {
    const double dx = std::abs(std::log(static_cast<double>(x.v) / x.u));
    const double dy = std::abs(std::log(static_cast<double>(y.v) / y.u));
    if (dx != dy) return dx < dy;
    return x.v < y.v;
  });
  return steps;
}

// Position on b's time axis matched to knot i + m of a inside the segment
// (i, j) -> (i + u, j + v). Warp images are generated with the same formula.
double matched_time(const TimeGrid& g, std::size_t i, std::size_t j, int u, int v, int m) {
  if (m == 0) return g[j];
  if (m == u) return g[j + v];
  const double f = (g[i + m] - g[i]) / (g[i + u] - g[i]);
  return g[j] + f * (g[j + v] - g[j]);
}

struct LatticePath {
  std::vector<std::pair<std::size_t, std::size_t>> knots;
  double cost = 0.0;
};

template <typename SegmentCost>
LatticePath solve_lattice(std::size_t last, const std::vector<Step>& steps, SegmentCost&& segment) {
  const std::size_t n = last + 1;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> best(n * n, kInf);
  std::vector<std::uint8_t> choice(n * n, 0);
  best[0] = 0.0;

  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 1; j < n; ++j) {
      double b = kInf;
      std::uint8_t c = 0;
      for (std::size_t s = 0; s < steps.size(); ++s) {
        const auto u = static_cast<std::size_t>(steps[s].u);
        const auto v = static_cast<std::size_t>(steps[s].v);
        if (u > i || v > j) continue;
        const double prev = best[(i - u) * n + (j - v)];
        if (prev == kInf) continue;
        const double total = prev + segment(i - u, j - v, steps[s].u, steps[s].v);
        // Later (less diagonal) steps must win by more than rounding noise.
        if (total < b - 1e-12 * (1.0 + std::abs(b)) || b == kInf) {
          b = total;
          c = static_cast<std::uint8_t>(s);
        }
      }
      best[i * n + j] = b;
      choice[i * n + j] = c;
    }
  }

  LatticePath path;
  path.cost = best[last * n + last];
  std::size_t i = last;
  std::size_t j = last;
  path.knots.emplace_back(i, j);
  while (i > 0 || j > 0) {
    const Step& s = steps[choice[i * n + j]];
    i -= static_cast<std::size_t>(s.u);
    j -= static_cast<std::size_t>(s.v);
    path.knots.emplace_back(i, j);
  }
  std::reverse(path.knots.begin(), path.knots.end());
  return path;
}

Warp path_to_warp(const TimeGrid& g, const LatticePath& path) {
  std::vector<double> image(g.size());
  for (std::size_t s = 0; s + 1 < path.knots.size(); ++s) {
    const auto [i, j] = path.knots[s];
    const auto [i2, j2] = path.knots[s + 1];
    const int u = static_cast<int>(i2 - i);
    const int v = static_cast<int>(j2 - j);
    for (int m = 0; m < u; ++m) image[i + m] = matched_time(g, i, j, u, v, m);
  }
  image.back() = 1.0;
  return Warp(g, std::move(image));
}

Vec4 slerp(const Vec4& a, const Vec4& b, double f) {
  if (f <= 0.0) return a;
  if (f >= 1.0) return b;
  const double c = std::clamp(a.dot(b), -1.0, 1.0);
  const double theta = std::acos(c);
  if (theta < 1e-9) return ((1.0 - f) * a + f * b).normalized();
  const double s = std::sin(theta);
  return (std::sin((1.0 - f) * theta) / s) * a + (std::sin(f * theta) / s) * b;
}

TemporalAlignment align_intrinsic(const RotCurve& a, const RotCurve& b, const TemporalOptions& opts) {
  const TimeGrid& g = a.grid();
  const GeodesicInterpolator interp(b);
  const bool right = opts.variant != LossVariant::kI2;
  const bool left = opts.variant != LossVariant::kI1;
  const double weight = (right && left) ? 0.5 : 1.0;

  auto segment = [&](std::size_t i, std::size_t j, int u, int v) {
    double cost = 0.0;
    Rotation3 prev_r;
    Rotation3 prev_l;
    for (int m = 0; m <= u; ++m) {
      const Rotation3 bs = (m == 0) ? b[j] : (m == u) ? b[j + v] : interp(matched_time(g, i, j, u, v, m));
      const Rotation3& as = a[i + m];
      if (right) {
        const Rotation3 rel = as * bs.transpose();
        if (m > 0) cost += weight * geo_dist(prev_r, rel);
        prev_r = rel;
      }
      if (left) {
        const Rotation3 rel = as.transpose() * bs;
        if (m > 0) cost += weight * geo_dist(prev_l, rel);
        prev_l = rel;
      }
    }
    return cost;
  };

  const LatticePath path = solve_lattice(g.last(), lattice_steps(opts.slope_window), segment);
  return {path_to_warp(g, path), path.cost};
}

TemporalAlignment align_l2quat(const RotCurve& a, const RotCurve& b, const TemporalOptions& opts) {
  const TimeGrid& g = a.grid();
  const QuatCurve la = lift(a);
  const QuatCurve lb = lift(b);
  const auto steps = lattice_steps(opts.slope_window);

  auto run = [&](double sign) {
    auto b_at = [&](std::size_t i, std::size_t j, int u, int v, int m) -> Vec4 {
      if (m == 0) return sign * lb[j].coeffs();
      if (m == u) return sign * lb[j + v].coeffs();
      const double s = matched_time(g, i, j, u, v, m);
      const std::size_t k = g.interval(s);
      const double f = (s - g[k]) / (g[k + 1] - g[k]);
      return sign * slerp(lb[k].coeffs(), lb[k + 1].coeffs(), f);
    };
    auto segment = [&](std::size_t i, std::size_t j, int u, int v) {
      double cost = 0.0;
      double prev = (la[i].coeffs() - b_at(i, j, u, v, 0)).squaredNorm();
      for (int m = 1; m <= u; ++m) {
        const double cur = (la[i + m].coeffs() - b_at(i, j, u, v, m)).squaredNorm();
        cost += 0.5 * (g[i + m] - g[i + m - 1]) * (prev + cur);
        prev = cur;
      }
      return cost;
    };
    return solve_lattice(g.last(), steps, segment);
  };

  const LatticePath same = run(1.0);
  const LatticePath flipped = run(-1.0);
  const LatticePath& best = flipped.cost < same.cost ? flipped : same;
  return {path_to_warp(g, best), best.cost};
}

}  // namespace

TemporalAlignment temporal_align_with_cost(const RotCurve& a, const RotCurve& b,
                                           const TemporalOptions& opts) {
  require_same_grid(a.grid(), b.grid(), "temporal_align");
  if (opts.variant == LossVariant::kL2Quat) return align_l2quat(a, b, opts);
  return align_intrinsic(a, b, opts);
}

Warp temporal_align(const RotCurve& a, const RotCurve& b, const TemporalOptions& opts) {
  return temporal_align_with_cost(a, b, opts).warp;
}

}  // namespace so3fda
