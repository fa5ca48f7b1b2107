// sda_sim: mobility trace generation, single-cell runs, parameter sweeps and
// plot-data emission for the secure data aggregation simulator.
//
//   sda_sim gen-traces --vmax 10 --profiles 10 --out traces/
//   sda_sim run --tree-type LET --vmax 10 --profiles 10 --out out/
//   sda_sim sweep [--paper-grid] --profiles 10 --out out/
//   sda_sim emit-plots --csv out/results.csv --out out/plots

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "sda/config.hpp"
#include "sda/engine.hpp"
#include "sda/mobility.hpp"
#include "sda/results.hpp"
#include "sda/sweep.hpp"

namespace fs = std::filesystem;

namespace {

struct ScenarioFlags {
  std::string config_file;
  std::map<std::string, std::string> values;  // config key -> raw text

  void add_to(CLI::App& app, bool with_sweep_dimensions = true) {
    app.add_option("--config", config_file, "key = value scenario file")->check(CLI::ExistingFile);
    const std::vector<std::pair<std::string, std::string>> fixed = {
        {"--cf-prob", "cf_prob"},         {"--num-nodes", "num_nodes"},
        {"--horizon", "horizon"},         {"--mean-data", "mean_data"},
        {"--stdd-data", "stdd_data"},     {"--sink-x", "sink_x"},
        {"--sink-y", "sink_y"},           {"--rounds-per-second", "rounds_per_second"},
        {"--trust", "trust"},             {"--keys-for-blacklisted", "keys_for_blacklisted"},
    };
    const std::vector<std::pair<std::string, std::string>> swept = {
        {"--tree-type", "tree_type"},     {"--trans-range", "trans_range"},
        {"--vmax", "vmax"},               {"--bw-size", "bw_size"},
        {"--tsb-size", "tsb_size"},       {"--trust-threshold", "trust_threshold"},
        {"--history-weight", "history_weight"}, {"--max-cf-nodes", "max_cf_nodes"},
    };
    for (const auto& [flag, key] : fixed) app.add_option(flag, values[key], key);
    if (with_sweep_dimensions) {
      for (const auto& [flag, key] : swept) app.add_option(flag, values[key], key);
    }
  }

  sda::ScenarioConfig build() const {
    sda::ScenarioConfig config;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      config = sda::read_config(in);
    }
    for (const auto& [key, value] : values) {
      if (!value.empty()) sda::apply_setting(config, key, value);
    }
    config.validate();
    return config;
  }
};

std::string trace_name(std::uint64_t seed) { return "trace_" + std::to_string(seed) + ".txt"; }

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void print_row(const sda::SweepRow& row) {
  const auto& m = row.metrics;
  std::printf("%s vmax=%g range=%g bw=%zu tsb=%zu thr=%g hw=%g cf=%zu  median=%s  sink=%s  fp=%.2f\n",
              std::string(sda::to_string(row.config.tree_type)).c_str(), row.config.vmax,
              row.config.trans_range, row.config.bw_size, row.config.tsb_size,
              row.config.trust_threshold, row.config.history_weight, row.config.max_cf_nodes,
              m.median_detect_rounds ? std::to_string(*m.median_detect_rounds).c_str() : "NA",
              m.avg_sink_value ? std::to_string(*m.avg_sink_value).c_str() : "NA",
              m.false_positives);
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure data aggregation simulator for mobile sensor networks"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::size_t profiles = 10;
  std::string out_dir = "out";
  unsigned threads = std::max(1U, std::thread::hardware_concurrency());

  // gen-traces
  auto* gen = app.add_subcommand("gen-traces", "Write Random Waypoint traces, one file per profile");
  ScenarioFlags gen_flags;
  gen_flags.add_to(*gen);
  gen->add_option("--seed", seed, "first profile seed");
  gen->add_option("--profiles", profiles, "number of profiles");
  gen->add_option("--out", out_dir, "output directory");

  // run
  auto* run = app.add_subcommand("run", "Run one scenario cell over several profiles");
  ScenarioFlags run_flags;
  run_flags.add_to(*run);
  std::string traces_dir;
  bool trace_dump = false;
  run->add_option("--seed", seed, "first profile seed");
  run->add_option("--profiles", profiles, "number of profiles");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--traces", traces_dir, "read trace_<seed>.txt files instead of generating")
      ->check(CLI::ExistingDirectory);
  run->add_flag("--trace-dump", trace_dump, "write the key-protocol message log per profile");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid and write CSV + plot data");
  ScenarioFlags sweep_flags;
  sweep_flags.add_to(*sweep, false);
  bool paper_grid = false;
  sweep->add_option("--seed", seed, "first profile seed");
  sweep->add_option("--profiles", profiles, "profiles per cell");
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--threads", threads, "worker threads");
  sweep->add_flag("--paper-grid", paper_grid, "full 720-cell grid instead of the 8-cell desk grid");
  sweep->add_option("--tree-type", sweep_flags.values["tree_type"], "tree type for --paper-grid");

  // emit-plots
  auto* plots = app.add_subcommand("emit-plots", "Group a results CSV into plot-data files");
  std::string csv_path;
  plots->add_option("--csv", csv_path, "results CSV")->required()->check(CLI::ExistingFile);
  plots->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (profiles == 0) throw std::runtime_error("--profiles must be >= 1");
    const fs::path out(out_dir);
    fs::create_directories(out);

    if (gen->parsed()) {
      const sda::ScenarioConfig config = gen_flags.build();
      for (std::size_t p = 0; p < profiles; ++p) {
        auto file = open_out(out / trace_name(seed + p));
        sda::write_trace(file, sda::profile_trace(config, seed + p));
      }
      std::printf("wrote %zu traces to %s\n", profiles, out.string().c_str());
      return 0;
    }

    if (run->parsed()) {
      const sda::ScenarioConfig config = run_flags.build();
      std::vector<sda::ProfileResult> results;
      for (std::size_t p = 0; p < profiles; ++p) {
        const std::uint64_t profile_seed = seed + p;
        sda::MobilityTrace trace;
        if (!traces_dir.empty()) {
          std::ifstream in(fs::path(traces_dir) / trace_name(profile_seed));
          if (!in) throw std::runtime_error("missing trace for seed " + std::to_string(profile_seed));
          trace = sda::read_trace(in);
        } else {
          trace = sda::profile_trace(config, profile_seed);
        }
        std::ofstream dump;
        if (trace_dump) dump = open_out(out / ("protocol_trace_" + std::to_string(profile_seed) + ".txt"));
        results.push_back(sda::run_profile(config, trace, profile_seed, trace_dump ? &dump : nullptr));
        const auto& r = results.back();
        std::printf("profile %llu: median=%s sink=%s detected=%zu/%zu fp=%zu keys=%zu trees=%zu\n",
                    static_cast<unsigned long long>(profile_seed),
                    r.median_detect_rounds ? std::to_string(*r.median_detect_rounds).c_str() : "NA",
                    r.avg_sink_value ? std::to_string(*r.avg_sink_value).c_str() : "NA",
                    r.detected_cf, r.cf_nodes, r.false_positives, r.keys_established, r.tree_builds);
      }
      const sda::SweepRow row{config, seed, profiles, sda::summarize(results)};
      auto csv = open_out(out / "results.csv");
      sda::write_csv(csv, {row});
      print_row(row);
      return 0;
    }

    if (sweep->parsed()) {
      const sda::ScenarioConfig base = sweep_flags.build();
      const sda::SweepGrid grid =
          paper_grid ? sda::SweepGrid::paper_grid(base) : sda::SweepGrid::desk_grid(base);
      auto csv = open_out(out / "results.csv");
      sda::write_csv_header(csv);
      sda::SweepOptions options;
      options.num_profiles = profiles;
      options.seed_base = seed;
      options.threads = threads;
      options.on_row = [&](const sda::SweepRow& row) {
        sda::write_csv_row(csv, row);
        csv.flush();
        print_row(row);
      };
      const auto rows = sda::run_sweep(grid, options);
      const auto files = sda::write_plot_data(rows, out / "plots");
      std::printf("%zu rows, %zu plot files in %s\n", rows.size(), files.size(), out.string().c_str());
      return 0;
    }

    if (plots->parsed()) {
      std::ifstream in(csv_path);
      const auto rows = sda::read_csv(in);
      const auto files = sda::write_plot_data(rows, out);
      for (const auto& f : files) std::printf("%s\n", f.string().c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "sda_sim: %s\n", e.what());
    return 1;
  }
  return 0;
}
