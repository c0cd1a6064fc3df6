#pragma once

// Simulation study: acceptance rates of the three permutation tests over the
// 5 x 5 grid of perturbation models, on aligned and misaligned samples.

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "so3fda/gpsim.hpp"
#include "so3fda/permutation.hpp"

namespace so3fda::cli {

enum class Table1Scale { kSmoke, kDesk, kFull };

Table1Scale parse_table1_scale(std::string_view tag);
std::string_view to_string(Table1Scale s);

enum class TableId {
  kNoActionAligned,     // (a)
  kNoActionMisaligned,  // (b)
  kPreregMisaligned,    // (c)
  kContinualMisaligned, // (d)
};

inline constexpr std::array<TableId, 4> kAllTables = {
    TableId::kNoActionAligned, TableId::kNoActionMisaligned, TableId::kPreregMisaligned,
    TableId::kContinualMisaligned};

TableId parse_table_id(std::string_view tag);
std::string_view to_string(TableId t);
std::string_view table_title(TableId t);

struct Table1Options {
  std::size_t n = 10;
  std::size_t sims = 200;
  std::size_t n_perm = 300;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  double noise_scale = 1.0;
  std::size_t grid_size = 101;
  bool temporal = false;
  TieRule tie_rule = TieRule::kConservative;
  LossVariant loss = LossVariant::kImean;
  EulerConvention convention = kDefaultEulerConvention;
  std::vector<TableId> tables{kAllTables.begin(), kAllTables.end()};
  /// (row, column) pairs; empty selects the upper triangle including the diagonal.
  std::vector<std::pair<ModelId, ModelId>> cells;

  static Table1Options for_scale(Table1Scale scale);
};

struct CellResult {
  ModelId row = ModelId::kA0;
  ModelId col = ModelId::kA0;
  std::size_t sims = 0;
  std::size_t accepted = 0;
  double rate = 0.0;
  /// Binomial standard error sqrt(rate (1 - rate) / sims).
  double se = 0.0;
};

struct TableResult {
  TableId id = TableId::kNoActionAligned;
  std::vector<CellResult> cells;

  const CellResult* find(ModelId row, ModelId col) const;
};

struct Table1Result {
  Table1Options options;
  std::vector<TableResult> tables;

  const TableResult* find(TableId id) const;
};

using Table1Progress = std::function<void(TableId, const CellResult&)>;

/// Simulation rep r of cell (row, col) draws the first sample from `row`
/// and the second from `col` on the stream (seed, cell, r); all tables share
/// those draws, the misaligned ones moving the second sample by the study
/// misalignment.
Table1Result run_table1(const Table1Options& opts, const Table1Progress& progress = {});

/// table,row,col,sims,accepted,rate,se
void write_table1_csv(std::ostream& out, const Table1Result& result);
/// Upper-triangular grids of acceptance rates in percent with standard errors.
void write_table1_text(std::ostream& out, const Table1Result& result);

}  // namespace so3fda::cli

namespace so3fda::cli {

/// Runs the study, prints the text tables to `summary` and, when out_csv is
/// set, writes the CSV form there.
Table1Result cmd_table1(const Table1Options& opts, const std::string& out_csv, std::ostream& summary,
                        std::size_t threads = 0);

}  // namespace so3fda::cli
