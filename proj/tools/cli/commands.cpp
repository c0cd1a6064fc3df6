#include "cli/commands.hpp"

#include <fstream>
#include <ostream>

#include "cli/report_io.hpp"
#include "so3fda/parallel.hpp"

namespace so3fda::cli {

TimeGrid RunConfig::grid() const { return TimeGrid::uniform(grid_size); }

SampleAlignOptions RunConfig::align_options() const {
  SampleAlignOptions o;
  o.use_spatial = spatial;
  o.use_temporal = temporal;
  // The warp search minimizes an intrinsic loss; l2quat runs its own program.
  o.temporal.variant = loss;
  return o;
}

TestOptions RunConfig::test_options() const {
  TestOptions o;
  o.loss = loss;
  o.tie_rule = tie_rule;
  o.alpha = alpha;
  o.align = align_options();
  return o;
}

void RunConfig::validate() const {
  if (grid_size < 2) throw Error("--grid-size must be at least 2");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("--alpha must lie in (0, 1)");
  if (n_perm < 1) throw Error("--nperm must be at least 1");
  if (!(noise_scale > 0.0)) throw Error("--noise-scale must be positive");
}

std::pair<Rotation3, Rotation3> study_misalignment(EulerConvention convention) {
  return {euler_to_rot({-0.5, 13.0, -9.0}, convention), euler_to_rot({12.0, 0.0, 5.0}, convention)};
}

Sample simulate_sample(const RunConfig& cfg, const SimulateOptions& opts) {
  if (opts.n == 0) throw Error("simulate: empty sample requested (n = 0)");
  const GPSpec spec = make_model(opts.model, cfg.grid(), cfg.noise_scale, cfg.convention);
  Sample s;
  s.curves = sample_gp(spec, opts.n, CounterRng(cfg.seed));
  if (opts.misalign) {
    const auto [p, q] = study_misalignment(cfg.convention);
    s.curves = act_isometry(p, q, s.curves);
  }
  for (std::size_t i = 0; i < opts.n; ++i) s.ids.push_back(std::string(to_string(opts.model)) + "_" + std::to_string(i));
  return s;
}

void cmd_simulate(const RunConfig& cfg, const SimulateOptions& opts) {
  save_sample(opts.out, simulate_sample(cfg, opts), opts.encoding, cfg.convention);
}

void cmd_pem(const RunConfig& cfg, const std::string& in, const std::string& out, Encoding encoding) {
  const Sample s = load_sample(in, cfg.grid(), cfg.convention);
  Sample mean;
  mean.ids = {"pem"};
  mean.curves = {pem(s.curves).curve};
  save_sample(out, mean, encoding, cfg.convention);
}

AlignSummary cmd_align(const RunConfig& cfg, const std::string& in1, const std::string& in2,
                       const std::optional<std::string>& out_aligned, Encoding encoding,
                       std::ostream& summary) {
  set_worker_threads(cfg.threads);
  const Sample a = load_sample(in1, cfg.grid(), cfg.convention);
  const Sample b = load_sample(in2, cfg.grid(), cfg.convention);
  const SampleAlignment r = sample_align(a.curves, b.curves, cfg.align_options());
  AlignSummary out{r.transform, rot_to_euler(r.transform.p, cfg.convention),
                   rot_to_euler(r.transform.q, cfg.convention)};
  summary << "p_euler_deg=" << format_double(out.p_angles.ax) << ',' << format_double(out.p_angles.ay)
          << ',' << format_double(out.p_angles.az) << '\n'
          << "q_euler_deg=" << format_double(out.q_angles.ax) << ',' << format_double(out.q_angles.ay)
          << ',' << format_double(out.q_angles.az) << '\n'
          << "warp_sup_distance="
          << format_double(r.transform.warp ? r.transform.warp->distance_from_identity() : 0.0) << '\n'
          << "iterations=" << r.transform.iterations << '\n'
          << "converged=" << (r.transform.converged ? "true" : "false") << '\n'
          << "unique=" << (r.transform.unique ? "true" : "false") << '\n'
          << "euler_convention=" << to_string(cfg.convention) << '\n';
  if (out_aligned) save_sample(*out_aligned, Sample{a.ids, r.aligned}, encoding, cfg.convention);
  return out;
}

TestReport cmd_test(const RunConfig& cfg, const TestCommandOptions& opts, std::ostream& summary) {
  set_worker_threads(cfg.threads);
  const Sample a = load_sample(opts.in1, cfg.grid(), cfg.convention);
  const Sample b = load_sample(opts.in2, cfg.grid(), cfg.convention);
  const auto plan = PermutationPlan::make(a.curves.size(), b.curves.size(), cfg.n_perm, cfg.seed);
  const TestReport report = run_test(opts.variant, a.curves, b.curves, plan, cfg.test_options());
  write_report(summary, report);
  if (!opts.report.empty()) {
    std::ofstream f(opts.report, std::ios::binary);
    if (!f) throw Error("cannot open '" + opts.report + "' for writing");
    write_report(f, report);
  }
  if (!opts.statistics.empty()) {
    std::ofstream f(opts.statistics, std::ios::binary);
    if (!f) throw Error("cannot open '" + opts.statistics + "' for writing");
    write_statistics_csv(f, report);
  }
  return report;
}

}  // namespace so3fda::cli
