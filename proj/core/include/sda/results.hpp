#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "sda/sweep.hpp"

namespace sda {

inline constexpr std::string_view kCsvHeader =
    "tree_type,vmax,trans_range,bw_size,tsb_size,trust_threshold,history_weight,max_cf_nodes,"
    "seed_base,num_profiles,median_detect_rounds,avg_sink_value,false_positives,"
    "keys_established,rounds_without_tree";

/// Undefined metrics are written as "NA".
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const SweepRow& row);
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Parses a CSV written by write_csv. Throws std::runtime_error on a bad
/// header or row.
std::vector<SweepRow> read_csv(std::istream& in);

/// One whitespace-separated data file per (vmax, bw_size, metric), named
/// `<metric>_vmax<v>_bw<b>.dat` with metric in {median_detect_rounds,
/// avg_sink_value}. Returns the files written, in name order.
std::vector<std::filesystem::path> write_plot_data(const std::vector<SweepRow>& rows,
                                                   const std::filesystem::path& dir);

}  // namespace sda
