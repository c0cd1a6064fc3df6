#include <CLI11.hpp>

#include <iostream>
#include <vector>
#include <string>

#include "cli/commands.hpp"
#include "cli/gait.hpp"
#include "cli/table1.hpp"

namespace {

using namespace so3fda;
using namespace so3fda::cli;

const std::vector<std::string> kOnOff = {"on", "off"};
const std::vector<std::string> kEncodings = {"matrix", "quaternion", "euler_deg"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sample inference for rotation-valued curves"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Flat key=value file mirroring the long flags");

  RunConfig cfg;
  app.add_option("--grid-size", cfg.grid_size, "Points of the common time grid")->capture_default_str();
  app.add_option("--seed", cfg.seed, "64-bit seed for every random stream")->capture_default_str();
  std::string loss_tag = "imean", tie_tag = "conservative", spatial_tag = "on", temporal_tag = "on",
              convention_tag = "xyz";
  app.add_option("--loss", loss_tag, "Loss: i1, i2, imean or l2quat")
      ->check(CLI::IsMember({"i1", "i2", "imean", "l2quat"}))
      ->capture_default_str();
  app.add_option("--tie-rule", tie_tag, "p-value tie rule")
      ->check(CLI::IsMember({"conservative", "strict"}))
      ->capture_default_str();
  app.add_option("--alpha", cfg.alpha, "Test level")->capture_default_str();
  auto* nperm = app.add_option("--nperm", cfg.n_perm, "Permutations, including the observed split")
                    ->capture_default_str();
  app.add_option("--spatial", spatial_tag, "Spatial registration")
      ->check(CLI::IsMember(kOnOff))
      ->capture_default_str();
  auto* temporal = app.add_option("--temporal", temporal_tag, "Temporal registration")
                       ->check(CLI::IsMember(kOnOff))
                       ->capture_default_str();
  app.add_option("--euler-convention", convention_tag, "Euler convention: xyz or zyx")
      ->check(CLI::IsMember({"xyz", "zyx"}))
      ->capture_default_str();
  app.add_option("--noise-scale", cfg.noise_scale, "Multiplier on the simulated noise")
      ->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads, 0 for all cores")->capture_default_str();

  const auto encodings = CLI::IsMember(kEncodings);

  // simulate
  SimulateOptions sim;
  std::string model_tag = "A0";
  auto* simulate = app.add_subcommand("simulate", "Draw curves from a perturbation model");
  simulate->add_option("--model", model_tag, "A0, B0.5, B1, B2 or B2.5")->capture_default_str();
  simulate->add_option("-n,--n", sim.n, "Number of curves")->capture_default_str();
  simulate->add_flag("--misalign", sim.misalign, "Apply the study misalignment P c Q");
  std::string sim_encoding = "matrix";
  simulate->add_option("--encoding", sim_encoding, "Output encoding")->check(encodings)->capture_default_str();
  simulate->add_option("-o,--out", sim.out, "Output CSV")->required();

  // pem
  std::string pem_in, pem_out;
  std::string pem_encoding = "euler_deg";
  auto* pem_cmd = app.add_subcommand("pem", "Pointwise extrinsic mean of a sample");
  pem_cmd->add_option("-i,--in", pem_in, "Input sample")->required()->check(CLI::ExistingFile);
  pem_cmd->add_option("-o,--out", pem_out, "Output CSV")->required();
  pem_cmd->add_option("--encoding", pem_encoding, "Output encoding")->check(encodings)->capture_default_str();

  // align
  std::string align_in1, align_in2, align_out;
  std::string align_encoding = "matrix";
  auto* align = app.add_subcommand("align", "Register the first sample onto the second");
  align->add_option("--in1", align_in1, "Sample to move")->required()->check(CLI::ExistingFile);
  align->add_option("--in2", align_in2, "Reference sample")->required()->check(CLI::ExistingFile);
  align->add_option("-o,--out", align_out, "Write the registered first sample here");
  align->add_option("--encoding", align_encoding, "Output encoding")->check(encodings)->capture_default_str();

  // test
  TestCommandOptions test_opts;
  auto* test = app.add_subcommand("test", "Two-sample permutation test");
  std::string variant_tag = "none";
  test->add_option("--variant", variant_tag, "none, prereg or continual")
      ->check(CLI::IsMember({"none", "prereg", "continual"}))
      ->capture_default_str();
  test->add_option("--in1", test_opts.in1, "First sample")->required()->check(CLI::ExistingFile);
  test->add_option("--in2", test_opts.in2, "Second sample")->required()->check(CLI::ExistingFile);
  test->add_option("--report", test_opts.report, "Write the key=value report here");
  test->add_option("--stats", test_opts.statistics, "Write per-permutation statistics CSV here");

  // table1
  std::string scale_tag = "desk", tables_tag = "abcd", table_out;
  std::size_t table_n = 0, table_sims = 0;
  auto* table1 = app.add_subcommand("table1", "Simulation study of the three tests");
  table1->add_option("--scale", scale_tag, "smoke, desk or full")->capture_default_str();
  table1->add_option("--tables", tables_tag, "Subset of a, b, c, d")->capture_default_str();
  table1->add_option("-n,--n", table_n, "Curves per sample (default from scale)");
  table1->add_option("--sims", table_sims, "Simulations per cell (default from scale)");
  table1->add_option("-o,--out", table_out, "Write the CSV form here");

  // gait
  std::string upper, lower, gait_out;
  std::string gait_encoding = "matrix";
  auto* gait = app.add_subcommand("gait", "Knee curves E_u E_l^T from leg frame curves");
  gait->add_option("--upper", upper, "Upper-leg frames")->required()->check(CLI::ExistingFile);
  gait->add_option("--lower", lower, "Lower-leg frames")->required()->check(CLI::ExistingFile);
  gait->add_option("-o,--out", gait_out, "Output CSV")->required();
  gait->add_option("--encoding", gait_encoding, "Output encoding")->check(encodings)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    cfg.loss = parse_loss(loss_tag);
    cfg.tie_rule = parse_tie_rule(tie_tag);
    cfg.spatial = spatial_tag == "on";
    cfg.temporal = temporal_tag == "on";
    cfg.convention = parse_euler_convention(convention_tag);
    cfg.validate();
    if (simulate->parsed()) {
      sim.model = parse_model(model_tag);
      sim.encoding = parse_encoding(sim_encoding);
      cmd_simulate(cfg, sim);
    } else if (pem_cmd->parsed()) {
      cmd_pem(cfg, pem_in, pem_out, parse_encoding(pem_encoding));
    } else if (align->parsed()) {
      cmd_align(cfg, align_in1, align_in2,
                align_out.empty() ? std::nullopt : std::optional<std::string>(align_out), parse_encoding(align_encoding),
                std::cout);
    } else if (test->parsed()) {
      test_opts.variant = parse_test_variant(variant_tag);
      cmd_test(cfg, test_opts, std::cout);
    } else if (table1->parsed()) {
      Table1Options t = Table1Options::for_scale(parse_table1_scale(scale_tag));
      t.tables.clear();
      for (const char c : tables_tag) t.tables.push_back(parse_table_id(std::string_view(&c, 1)));
      if (table_n > 0) t.n = table_n;
      if (table_sims > 0) t.sims = table_sims;
      if (nperm->count() > 0) t.n_perm = cfg.n_perm;
      // Temporal registration is off in the study unless asked for.
      t.temporal = temporal->count() > 0 && cfg.temporal;
      t.alpha = cfg.alpha;
      t.seed = cfg.seed;
      t.noise_scale = cfg.noise_scale;
      t.grid_size = cfg.grid_size;
      t.tie_rule = cfg.tie_rule;
      t.loss = cfg.loss;
      t.convention = cfg.convention;
      cmd_table1(t, table_out, std::cout, cfg.threads);
    } else if (gait->parsed()) {
      cmd_gait(upper, lower, gait_out, cfg.grid(), parse_encoding(gait_encoding), cfg.convention);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
