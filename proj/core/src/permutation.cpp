#include "so3fda/permutation.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "so3fda/parallel.hpp"
#include "so3fda/rng.hpp"

namespace so3fda {

__extension__ typedef unsigned __int128 u128;

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  u128 r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > kMax) return kMax;
  }
  return static_cast<std::uint64_t>(r);
}

PermutationPlan PermutationPlan::make(std::size_t n1, std::size_t n2, std::size_t n_perm,
                                      std::uint64_t seed) {
  if (n1 < 1 || n2 < 1) throw Error("permutation plan: both samples must be nonempty");
  if (n_perm < 1) throw Error("permutation plan: need at least one permutation");
  PermutationPlan plan{n1, n2, n_perm, seed, false};
  const std::uint64_t total = binomial(n1 + n2, n1);
  if (total <= n_perm) {
    plan.exhaustive = true;
    plan.n_perm = static_cast<std::size_t>(total);
  }
  return plan;
}

std::vector<std::size_t> perm_stream(const PermutationPlan& plan, std::size_t index) {
  if (index >= plan.n_perm) throw Error("perm_stream: index out of range");
  const std::size_t n = plan.n1 + plan.n2;
  std::vector<std::size_t> out;
  out.reserve(plan.n1);
  if (index == 0) {
    for (std::size_t i = 0; i < plan.n1; ++i) out.push_back(i);
    return out;
  }
  if (plan.exhaustive) {
    // Unrank the index-th n1-subset of {0..n-1} in lexicographic order.
    std::uint64_t rank = index;
    std::size_t next = 0;
    for (std::size_t slot = 0; slot < plan.n1; ++slot) {
      for (std::size_t c = next;; ++c) {
        const std::uint64_t with_c = binomial(n - c - 1, plan.n1 - slot - 1);
        if (rank < with_c) {
          out.push_back(c);
          next = c + 1;
          break;
        }
        rank -= with_c;
      }
    }
    return out;
  }
  CounterRng rng = CounterRng(plan.seed).substream(index);
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < plan.n1; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  out.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(plan.n1));
  std::sort(out.begin(), out.end());
  return out;
}

TieRule parse_tie_rule(std::string_view tag) {
  if (tag == "conservative") return TieRule::kConservative;
  if (tag == "strict") return TieRule::kStrict;
  throw Error("unknown tie rule '" + std::string(tag) + "' (expected strict or conservative)");
}

std::string_view to_string(TieRule r) {
  return r == TieRule::kConservative ? "conservative" : "strict";
}

TestVariant parse_test_variant(std::string_view tag) {
  if (tag == "none") return TestVariant::kNone;
  if (tag == "prereg") return TestVariant::kPrereg;
  if (tag == "continual") return TestVariant::kContinual;
  throw Error("unknown test variant '" + std::string(tag) + "' (expected none, prereg, continual)");
}

std::string_view to_string(TestVariant v) {
  switch (v) {
    case TestVariant::kNone: return "none";
    case TestVariant::kPrereg: return "prereg";
    case TestVariant::kContinual: return "continual";
  }
  return "?";
}

void finalize_report(TestReport& report) {
  const auto& d = report.statistics_perm;
  report.statistic_observed = d.front();
  std::size_t count = 0;
  for (const double x : d) {
    const bool hit = report.tie_rule == TieRule::kConservative ? x >= d.front() : x > d.front();
    if (hit) ++count;
  }
  report.p_value = static_cast<double>(count) / static_cast<double>(d.size());
  report.reject = report.p_value < report.alpha;
}

namespace {

struct Pooled {
  std::vector<RotCurve> curves;
  std::size_t n1;
};

Pooled pool_samples(std::span<const RotCurve> chi1, std::span<const RotCurve> chi2,
                    const PermutationPlan& plan) {
  if (chi1.size() != plan.n1 || chi2.size() != plan.n2) {
    throw Error("permutation test: sample sizes do not match the plan");
  }
  Pooled p{{}, chi1.size()};
  p.curves.reserve(chi1.size() + chi2.size());
  p.curves.insert(p.curves.end(), chi1.begin(), chi1.end());
  p.curves.insert(p.curves.end(), chi2.begin(), chi2.end());
  const TimeGrid& grid = p.curves.front().grid();
  for (const auto& c : p.curves) require_same_grid(grid, c.grid(), "permutation test");
  return p;
}

// Complement of a sorted subset of {0..n-1}.
std::vector<std::size_t> complement(const std::vector<std::size_t>& subset, std::size_t n) {
  std::vector<std::size_t> out;
  out.reserve(n - subset.size());
  std::size_t s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (s < subset.size() && subset[s] == i) {
      ++s;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

TestReport empty_report(TestVariant variant, const PermutationPlan& plan, const TestOptions& opts) {
  TestReport r;
  r.variant = variant;
  r.loss = opts.loss;
  r.tie_rule = opts.tie_rule;
  r.seed = plan.seed;
  r.alpha = opts.alpha;
  r.n1 = plan.n1;
  r.n2 = plan.n2;
  r.exhaustive = plan.exhaustive;
  r.statistics_perm.assign(plan.n_perm, 0.0);
  return r;
}

template <typename Statistic>
void evaluate_splits(TestReport& report, const PermutationPlan& plan, Statistic&& statistic) {
  const std::size_t n = plan.n1 + plan.n2;
  parallel_for(plan.n_perm, [&](std::size_t l) {
    const auto g1 = perm_stream(plan, l);
    const auto g2 = complement(g1, n);
    try {
      report.statistics_perm[l] = statistic(g1, g2);
    } catch (const Error& e) {
      throw PermutationError("split " + std::to_string(l) + ": " + e.what(), l);
    }
  });
  finalize_report(report);
}

std::vector<RotCurve> gather(const std::vector<RotCurve>& pooled, std::span<const std::size_t> idx) {
  std::vector<RotCurve> out;
  out.reserve(idx.size());
  for (const std::size_t i : idx) out.push_back(pooled[i]);
  return out;
}

}  // namespace

TestReport test_no_action(std::span<const RotCurve> chi1, std::span<const RotCurve> chi2,
                          const PermutationPlan& plan, const TestOptions& opts) {
  const Pooled pooled = pool_samples(chi1, chi2, plan);
  const TimeGrid& grid = pooled.curves.front().grid();
  const std::size_t points = grid.size();

  // Matrices laid out per curve for cheap group means.
  std::vector<std::vector<Mat3>> mats(pooled.curves.size());
  for (std::size_t i = 0; i < pooled.curves.size(); ++i) {
    mats[i].reserve(points);
    for (const auto& r : pooled.curves[i].values()) mats[i].push_back(r.matrix());
  }
  auto group_mean = [&](const std::vector<std::size_t>& idx) {
    std::vector<Mat3> means(points, Mat3::Zero());
    for (const std::size_t i : idx) {
      for (std::size_t k = 0; k < points; ++k) means[k] += mats[i][k];
    }
    const double inv = 1.0 / static_cast<double>(idx.size());
    for (auto& m : means) m *= inv;
    return pem_from_means(grid, means).curve;
  };

  TestReport report = empty_report(TestVariant::kNone, plan, opts);
  evaluate_splits(report, plan, [&](const auto& g1, const auto& g2) {
    return loss(group_mean(g1), group_mean(g2), opts.loss);
  });
  return report;
}

TestReport test_prereg(std::span<const RotCurve> chi1, std::span<const RotCurve> chi2,
                       const PermutationPlan& plan, const TestOptions& opts) {
  const SampleAlignment aligned = sample_align(chi1, chi2, opts.align);
  TestReport report = test_no_action(aligned.aligned, chi2, plan, opts);
  report.variant = TestVariant::kPrereg;
  return report;
}

RotCurve continual_group_summary(std::span<const RotCurve> from_chi1,
                                 std::span<const RotCurve> from_chi2,
                                 const SampleAlignOptions& align) {
  if (from_chi1.empty() && from_chi2.empty()) throw Error("continual test: empty group");
  if (from_chi1.empty()) return pem(from_chi2).curve;
  if (from_chi2.empty()) return pem(from_chi1).curve;
  const RotCurve eta = pem(from_chi2).curve;
  const SampleAlignment moved = sample_align(from_chi1, from_chi2, align);
  const RotCurve gamma = pem(moved.aligned).curve;
  const std::vector<RotCurve> both = {eta, gamma};
  return pem(both).curve;
}

TestReport test_continual(std::span<const RotCurve> chi1, std::span<const RotCurve> chi2,
                          const PermutationPlan& plan, const TestOptions& opts) {
  const Pooled pooled = pool_samples(chi1, chi2, plan);
  const std::size_t n1 = pooled.n1;

  auto summary = [&](const std::vector<std::size_t>& idx) {
    std::vector<std::size_t> origin1;
    std::vector<std::size_t> origin2;
    for (const std::size_t i : idx) (i < n1 ? origin1 : origin2).push_back(i);
    return continual_group_summary(gather(pooled.curves, origin1), gather(pooled.curves, origin2),
                                   opts.align);
  };

  TestReport report = empty_report(TestVariant::kContinual, plan, opts);
  evaluate_splits(report, plan, [&](const auto& g1, const auto& g2) {
    const std::vector<RotCurve> omega1 = {summary(g1)};
    const std::vector<RotCurve> omega2 = {summary(g2)};
    const SampleAlignment moved = sample_align(omega1, omega2, opts.align);
    return loss(moved.aligned.front(), omega2.front(), opts.loss);
  });
  return report;
}

TestReport run_test(TestVariant variant, std::span<const RotCurve> chi1,
                    std::span<const RotCurve> chi2, const PermutationPlan& plan,
                    const TestOptions& opts) {
  switch (variant) {
    case TestVariant::kNone: return test_no_action(chi1, chi2, plan, opts);
    case TestVariant::kPrereg: return test_prereg(chi1, chi2, plan, opts);
    case TestVariant::kContinual: return test_continual(chi1, chi2, plan, opts);
  }
  throw Error("run_test: unknown variant");
}

}  // namespace so3fda
