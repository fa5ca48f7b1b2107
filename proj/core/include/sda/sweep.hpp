#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sda/config.hpp"
#include "sda/engine.hpp"

namespace sda {

/// Profile-averaged metrics of one experiment cell.
struct MetricsRecord {
  std::optional<double> median_detect_rounds;  // mean over profiles with a defined median
  std::optional<double> avg_sink_value;        // mean over profiles
  double false_positives = 0.0;
  double keys_established = 0.0;
  double rounds_without_tree = 0.0;
  double undetected_cf = 0.0;

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

struct SweepRow {
  ScenarioConfig config;
  std::uint64_t seed_base = 1;
  std::size_t num_profiles = 0;
  MetricsRecord metrics;
};

/// Cross product of the swept dimensions; unswept fields come from `base`.
struct SweepGrid {
  ScenarioConfig base;
  std::vector<TreeType> tree_types{TreeType::kMST, TreeType::kLET};
  std::vector<double> vmax{3.0, 10.0};
  std::vector<double> trans_range{25.0, 35.0};
  std::vector<std::size_t> bw_size{10, 50};
  std::vector<std::size_t> tsb_size{10, 30, 50};
  std::vector<double> trust_threshold{0.5, 0.7, 0.9};
  std::vector<double> history_weight{0.3, 0.5, 0.7, 0.9, 1.0};
  std::vector<std::size_t> max_cf_nodes{20, 40};

  /// The 720-cell grid of the full study, for base.tree_type only.
  static SweepGrid paper_grid(ScenarioConfig base = {});
  /// 8 cells: {MST, LET} x threshold {0.5, 0.9} x TSB {10, 50} at vmax 10,
  /// range 25, BW 10, history weight 0.3, 20 CF nodes.
  static SweepGrid desk_grid(ScenarioConfig base = {});

  /// Cells in row order: tree type outermost, CF count innermost.
  [[nodiscard]] std::vector<ScenarioConfig> cells() const;
};

/// Averages per-profile results into one record.
MetricsRecord summarize(const std::vector<ProfileResult>& profiles);

/// Runs one cell over profiles seed_base, seed_base + 1, ...
SweepRow run_cell(const ScenarioConfig& config, std::size_t num_profiles, std::uint64_t seed_base);

struct SweepOptions {
  std::size_t num_profiles = 10;
  std::uint64_t seed_base = 1;
  unsigned threads = 1;
  /// Called once per row, in grid order, as soon as the row and all rows
  /// before it are complete.
  std::function<void(const SweepRow&)> on_row;
};

/// Every (cell, profile) run is independent; they may execute on several
/// threads and the output order is always grid order.
std::vector<SweepRow> run_sweep(const SweepGrid& grid, const SweepOptions& options);

}  // namespace sda
