#pragma once

// Two-sample permutation tests for equality of center curves, optionally
// modulo the isometry and reparametrization actions.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "so3fda/estimate.hpp"

namespace so3fda {

struct PermutationPlan {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  /// Number of splits evaluated, including the observed split at index 0.
  std::size_t n_perm = 0;
  std::uint64_t seed = 0;
  /// All C(n1 + n2, n1) splits in lexicographic order.
  bool exhaustive = false;

  /// Switches to exhaustive enumeration when C(n1 + n2, n1) <= n_perm, in
  /// which case n_perm becomes the number of splits.
  static PermutationPlan make(std::size_t n1, std::size_t n2, std::size_t n_perm,
                              std::uint64_t seed);
};

/// Binomial coefficient, saturating at UINT64_MAX.
std::uint64_t binomial(std::size_t n, std::size_t k);

/// Sorted pooled indices (0-based; chi1 first) forming group 1 of split
/// `index`. Index 0 is the observed split {0, ..., n1 - 1}.
std::vector<std::size_t> perm_stream(const PermutationPlan& plan, std::size_t index);

enum class TieRule {
  kConservative,  // p = #{d_l >= d_0} / n_perm
  kStrict,        // p = #{d_l >  d_0} / n_perm
};

enum class TestVariant { kNone, kPrereg, kContinual };

TieRule parse_tie_rule(std::string_view tag);
std::string_view to_string(TieRule r);
TestVariant parse_test_variant(std::string_view tag);
std::string_view to_string(TestVariant v);

struct TestOptions {
  LossVariant loss = LossVariant::kImean;
  TieRule tie_rule = TieRule::kConservative;
  double alpha = 0.05;
  /// Registration used by the prereg and continual variants.
  SampleAlignOptions align;
};

struct TestReport {
  TestVariant variant = TestVariant::kNone;
  LossVariant loss = LossVariant::kImean;
  TieRule tie_rule = TieRule::kConservative;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  bool exhaustive = false;
  double statistic_observed = 0.0;
  /// By split index; entry 0 is the observed statistic.
  std::vector<double> statistics_perm;
  double p_value = 1.0;
  bool reject = false;
};

/// Raised when a split cannot be evaluated (e.g. undefined mean).
class PermutationError : public Error {
 public:
  PermutationError(const std::string& what, std::size_t index) : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// p-value and decision from per-split statistics.
void finalize_report(TestReport& report);

TestReport test_no_action(std::span<const RotCurve> chi1, std::span<const RotCurve> chi2,
                          const PermutationPlan& plan, const TestOptions& opts = {});

/// Aligns chi1 onto chi2 once, then runs test_no_action.
TestReport test_prereg(std::span<const RotCurve> chi1, std::span<const RotCurve> chi2,
                       const PermutationPlan& plan, const TestOptions& opts = {});

/// Registers within every permuted group by origin before comparing groups.
TestReport test_continual(std::span<const RotCurve> chi1, std::span<const RotCurve> chi2,
                          const PermutationPlan& plan, const TestOptions& opts = {});

TestReport run_test(TestVariant variant, std::span<const RotCurve> chi1,
                    std::span<const RotCurve> chi2, const PermutationPlan& plan,
                    const TestOptions& opts = {});

/// Summary curve of one permuted group in the continual test: registers the
/// origin-1 part onto the origin-2 part and averages the two means. A group
/// with only one origin is summarized by its mean.
RotCurve continual_group_summary(std::span<const RotCurve> from_chi1,
                                 std::span<const RotCurve> from_chi2,
                                 const SampleAlignOptions& align);

}  // namespace so3fda
