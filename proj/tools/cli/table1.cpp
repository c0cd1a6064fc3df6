#include "cli/table1.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "cli/commands.hpp"
#include "cli/sample_io.hpp"
#include "so3fda/parallel.hpp"

namespace so3fda::cli {

Table1Scale parse_table1_scale(std::string_view tag) {
  if (tag == "smoke") return Table1Scale::kSmoke;
  if (tag == "desk") return Table1Scale::kDesk;
  if (tag == "full") return Table1Scale::kFull;
  throw Error("unknown scale '" + std::string(tag) + "' (expected smoke, desk, full)");
}

std::string_view to_string(Table1Scale s) {
  switch (s) {
    case Table1Scale::kSmoke: return "smoke";
    case Table1Scale::kDesk: return "desk";
    case Table1Scale::kFull: return "full";
  }
  return "?";
}

TableId parse_table_id(std::string_view tag) {
  if (tag == "a") return TableId::kNoActionAligned;
  if (tag == "b") return TableId::kNoActionMisaligned;
  if (tag == "c") return TableId::kPreregMisaligned;
  if (tag == "d") return TableId::kContinualMisaligned;
  throw Error("unknown table '" + std::string(tag) + "' (expected a, b, c, d)");
}

std::string_view to_string(TableId t) {
  switch (t) {
    case TableId::kNoActionAligned: return "a";
    case TableId::kNoActionMisaligned: return "b";
    case TableId::kPreregMisaligned: return "c";
    case TableId::kContinualMisaligned: return "d";
  }
  return "?";
}

std::string_view table_title(TableId t) {
  switch (t) {
    case TableId::kNoActionAligned: return "no-action test, aligned samples";
    case TableId::kNoActionMisaligned: return "no-action test, misaligned samples";
    case TableId::kPreregMisaligned: return "preregistration test, misaligned samples";
    case TableId::kContinualMisaligned: return "continual-registration test, misaligned samples";
  }
  return "?";
}

Table1Options Table1Options::for_scale(Table1Scale scale) {
  Table1Options o;
  switch (scale) {
    case Table1Scale::kSmoke:
      o.sims = 50;
      o.n_perm = 100;
      break;
    case Table1Scale::kDesk:
      o.sims = 200;
      o.n_perm = 300;
      break;
    case Table1Scale::kFull:
      o.sims = 2000;
      o.n_perm = 5000;
      break;
  }
  return o;
}

const CellResult* TableResult::find(ModelId row, ModelId col) const {
  for (const auto& c : cells) {
    if (c.row == row && c.col == col) return &c;
  }
  return nullptr;
}

const TableResult* Table1Result::find(TableId id) const {
  for (const auto& t : tables) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

namespace {

std::size_t model_index(ModelId id) {
  for (std::size_t i = 0; i < kAllModels.size(); ++i) {
    if (kAllModels[i] == id) return i;
  }
  return 0;
}

TestVariant variant_of(TableId t) {
  switch (t) {
    case TableId::kNoActionAligned:
    case TableId::kNoActionMisaligned: return TestVariant::kNone;
    case TableId::kPreregMisaligned: return TestVariant::kPrereg;
    case TableId::kContinualMisaligned: return TestVariant::kContinual;
  }
  return TestVariant::kNone;
}

}  // namespace

Table1Result run_table1(const Table1Options& opts, const Table1Progress& progress) {
  if (opts.n < 1 || opts.sims < 1 || opts.n_perm < 1) throw Error("table1: sizes must be positive");
  std::vector<std::pair<ModelId, ModelId>> cells = opts.cells;
  if (cells.empty()) {
    for (std::size_t i = 0; i < kAllModels.size(); ++i)
      for (std::size_t j = i; j < kAllModels.size(); ++j) cells.emplace_back(kAllModels[i], kAllModels[j]);
  }

  const TimeGrid grid = TimeGrid::uniform(opts.grid_size);
  std::vector<GPSpec> specs;
  for (const ModelId m : kAllModels) specs.push_back(make_model(m, grid, opts.noise_scale, opts.convention));
  const auto [p, q] = study_misalignment(opts.convention);

  TestOptions test;
  test.loss = opts.loss;
  test.tie_rule = opts.tie_rule;
  test.alpha = opts.alpha;
  test.align.use_spatial = true;
  test.align.use_temporal = opts.temporal;
  test.align.temporal.variant = opts.loss;

  Table1Result result;
  result.options = opts;
  const CounterRng root(opts.seed);
  for (const TableId table : opts.tables) {
    TableResult tr;
    tr.id = table;
    const bool misaligned = table != TableId::kNoActionAligned;
    for (const auto& [row, col] : cells) {
      const std::size_t ri = model_index(row);
      const std::size_t ci = model_index(col);
      const CounterRng cell_rng = root.substream(ri * kAllModels.size() + ci);
      std::vector<char> accepted(opts.sims, 0);
      parallel_for(opts.sims, [&](std::size_t r) {
        const CounterRng rep = cell_rng.substream(r);
        const auto chi1 = sample_gp(specs[ri], opts.n, rep.substream(0));
        auto chi2 = sample_gp(specs[ci], opts.n, rep.substream(1));
        if (misaligned) chi2 = act_isometry(p, q, chi2);
        CounterRng perm_seed = rep.substream(2);
        const auto plan = PermutationPlan::make(opts.n, opts.n, opts.n_perm, perm_seed());
        accepted[r] = !run_test(variant_of(table), chi1, chi2, plan, test).reject;
      });
      CellResult c;
      c.row = row;
      c.col = col;
      c.sims = opts.sims;
      for (const char a : accepted) c.accepted += static_cast<std::size_t>(a);
      c.rate = static_cast<double>(c.accepted) / static_cast<double>(c.sims);
      c.se = std::sqrt(c.rate * (1.0 - c.rate) / static_cast<double>(c.sims));
      tr.cells.push_back(c);
      if (progress) progress(table, c);
    }
    result.tables.push_back(std::move(tr));
  }
  return result;
}

void write_table1_csv(std::ostream& out, const Table1Result& result) {
  out << "table,row,col,sims,accepted,rate,se\n";
  for (const auto& t : result.tables) {
    for (const auto& c : t.cells) {
      out << to_string(t.id) << ',' << to_string(c.row) << ',' << to_string(c.col) << ',' << c.sims
          << ',' << c.accepted << ',' << format_double(c.rate) << ',' << format_double(c.se) << '\n';
    }
  }
}

void write_table1_text(std::ostream& out, const Table1Result& result) {
  const auto& o = result.options;
  out << "acceptance rates in percent (standard error), N = " << o.n << ", " << o.sims
      << " simulations, " << o.n_perm << " permutations, alpha = " << format_double(o.alpha) << "\n";
  char buf[64];
  for (const auto& t : result.tables) {
    out << "\n(" << to_string(t.id) << ") " << table_title(t.id) << "\n";
    out << "        ";
    for (const ModelId m : kAllModels) {
      std::snprintf(buf, sizeof(buf), "%14s", std::string(to_string(m)).c_str());
      out << buf;
    }
    out << '\n';
    for (const ModelId row : kAllModels) {
      std::snprintf(buf, sizeof(buf), "%-8s", std::string(to_string(row)).c_str());
      out << buf;
      for (const ModelId col : kAllModels) {
        const CellResult* c = t.find(row, col);
        if (c) {
          std::snprintf(buf, sizeof(buf), "%7.1f (%4.1f)", 100.0 * c->rate, 100.0 * c->se);
        } else {
          std::snprintf(buf, sizeof(buf), "%14s", ".");
        }
        out << buf;
      }
      out << '\n';
    }
  }
}

}  // namespace so3fda::cli

namespace so3fda::cli {

Table1Result cmd_table1(const Table1Options& opts, const std::string& out_csv, std::ostream& summary,
                        std::size_t threads) {
  set_worker_threads(threads);
  const Table1Result r = run_table1(opts);
  write_table1_text(summary, r);
  if (!out_csv.empty()) {
    std::ofstream f(out_csv, std::ios::binary);
    if (!f) throw Error("cannot open '" + out_csv + "' for writing");
    write_table1_csv(f, r);
  }
  return r;
}

}  // namespace so3fda::cli
