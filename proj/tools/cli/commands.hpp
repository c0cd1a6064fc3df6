#pragma once

// Subcommand implementations. Each takes fully parsed options so it can be
// driven from tests as well as from main().

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

#include "cli/sample_io.hpp"
#include "so3fda/gpsim.hpp"
#include "so3fda/permutation.hpp"

namespace so3fda::cli {

/// Options shared by every subcommand.
struct RunConfig {
  std::size_t grid_size = 101;
  std::uint64_t seed = 1;
  LossVariant loss = LossVariant::kImean;
  TieRule tie_rule = TieRule::kConservative;
  double alpha = 0.05;
  std::size_t n_perm = 1000;
  bool spatial = true;
  bool temporal = true;
  EulerConvention convention = kDefaultEulerConvention;
  double noise_scale = 1.0;
  /// 0 uses every hardware thread.
  std::size_t threads = 0;

  TimeGrid grid() const;
  SampleAlignOptions align_options() const;
  TestOptions test_options() const;
  /// Throws Error when a value is out of range.
  void validate() const;
};

/// Fixed misalignment used by the simulation study: P with Euler angles
/// (-0.5, 13, -9) degrees and Q with (12, 0, 5) degrees.
std::pair<Rotation3, Rotation3> study_misalignment(EulerConvention convention = kDefaultEulerConvention);

struct SimulateOptions {
  ModelId model = ModelId::kA0;
  std::size_t n = 10;
  /// Apply the study misalignment c -> P c Q to every draw.
  bool misalign = false;
  Encoding encoding = Encoding::kMatrix;
  std::string out;
};

Sample simulate_sample(const RunConfig& cfg, const SimulateOptions& opts);
void cmd_simulate(const RunConfig& cfg, const SimulateOptions& opts);

/// Writes the pointwise extrinsic mean of the input sample as a one-curve file.
void cmd_pem(const RunConfig& cfg, const std::string& in, const std::string& out, Encoding encoding);

struct AlignSummary {
  AlignResult transform;
  EulerAngles p_angles;
  EulerAngles q_angles;
};

/// Registers the first sample onto the second; writes a key=value summary
/// and, when out_aligned is set, the moved first sample.
AlignSummary cmd_align(const RunConfig& cfg, const std::string& in1, const std::string& in2,
                       const std::optional<std::string>& out_aligned, Encoding encoding,
                       std::ostream& summary);

struct TestCommandOptions {
  TestVariant variant = TestVariant::kNone;
  std::string in1;
  std::string in2;
  /// Empty: print to the summary stream only.
  std::string report;
  std::string statistics;
};

TestReport cmd_test(const RunConfig& cfg, const TestCommandOptions& opts, std::ostream& summary);

}  // namespace so3fda::cli
