#include "sda/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace sda {

SweepGrid SweepGrid::paper_grid(ScenarioConfig base) {
  SweepGrid grid;
  grid.tree_types = {base.tree_type};
  grid.base = std::move(base);
  return grid;
}

SweepGrid SweepGrid::desk_grid(ScenarioConfig base) {
  SweepGrid grid;
  grid.base = std::move(base);
  grid.vmax = {10.0};
  grid.trans_range = {25.0};
  grid.bw_size = {10};
  grid.tsb_size = {10, 50};
  grid.trust_threshold = {0.5, 0.9};
  grid.history_weight = {0.3};
  grid.max_cf_nodes = {20};
  return grid;
}

std::vector<ScenarioConfig> SweepGrid::cells() const {
  std::vector<ScenarioConfig> out;
  for (TreeType tree : tree_types)
    for (double v : vmax)
      for (double range : trans_range)
        for (std::size_t bw : bw_size)
          for (std::size_t tsb : tsb_size)
            for (double thr : trust_threshold)
              for (double hw : history_weight)
                for (std::size_t cf : max_cf_nodes) {
                  ScenarioConfig c = base;
                  c.tree_type = tree;
                  c.vmax = v;
                  c.trans_range = range;
                  c.bw_size = bw;
                  c.tsb_size = tsb;
                  c.trust_threshold = thr;
                  c.history_weight = hw;
                  c.max_cf_nodes = cf;
                  out.push_back(c);
                }
  return out;
}

MetricsRecord summarize(const std::vector<ProfileResult>& profiles) {
  MetricsRecord m;
  double median_sum = 0.0;
  std::size_t median_n = 0;
  double sink_sum = 0.0;
  std::size_t sink_n = 0;
  for (const ProfileResult& p : profiles) {
    if (p.median_detect_rounds) {
      median_sum += *p.median_detect_rounds;
      ++median_n;
    }
    if (p.avg_sink_value) {
      sink_sum += *p.avg_sink_value;
      ++sink_n;
    }
    m.false_positives += static_cast<double>(p.false_positives);
    m.keys_established += static_cast<double>(p.keys_established);
    m.rounds_without_tree += static_cast<double>(p.rounds_without_tree);
    m.undetected_cf += static_cast<double>(p.undetected_cf);
  }
  if (median_n) m.median_detect_rounds = median_sum / static_cast<double>(median_n);
  if (sink_n) m.avg_sink_value = sink_sum / static_cast<double>(sink_n);
  if (!profiles.empty()) {
    const auto n = static_cast<double>(profiles.size());
    m.false_positives /= n;
    m.keys_established /= n;
    m.rounds_without_tree /= n;
    m.undetected_cf /= n;
  }
  return m;
}

SweepRow run_cell(const ScenarioConfig& config, std::size_t num_profiles, std::uint64_t seed_base) {
  std::vector<ProfileResult> results;
  results.reserve(num_profiles);
  for (std::size_t p = 0; p < num_profiles; ++p) {
    const std::uint64_t seed = seed_base + p;
    results.push_back(run_profile(config, profile_trace(config, seed), seed));
  }
  return SweepRow{config, seed_base, num_profiles, summarize(results)};
}

std::vector<SweepRow> run_sweep(const SweepGrid& grid, const SweepOptions& options) {
  const std::vector<ScenarioConfig> cells = grid.cells();
  if (cells.empty()) throw std::invalid_argument("run_sweep: empty grid");
  if (options.num_profiles == 0) throw std::invalid_argument("run_sweep: need >= 1 profile");
  const std::size_t profiles = options.num_profiles;
  const std::size_t jobs = cells.size() * profiles;

  std::vector<ProfileResult> results(jobs);
  std::vector<std::size_t> remaining(cells.size(), profiles);
  std::vector<SweepRow> rows(cells.size());
  std::size_t next_emit = 0;
  std::mutex mutex;
  std::atomic<std::size_t> next_job{0};
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const std::size_t job = next_job.fetch_add(1);
      if (job >= jobs) return;
      const std::size_t cell = job / profiles;
      const std::uint64_t seed = options.seed_base + job % profiles;
      try {
        results[job] = run_profile(cells[cell], profile_trace(cells[cell], seed), seed);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        next_job = jobs;
        return;
      }
      std::lock_guard lock(mutex);
      if (--remaining[cell] != 0) continue;
      std::vector<ProfileResult> cell_results(results.begin() + static_cast<std::ptrdiff_t>(cell * profiles),
                                              results.begin() + static_cast<std::ptrdiff_t>((cell + 1) * profiles));
      rows[cell] = SweepRow{cells[cell], options.seed_base, profiles, summarize(cell_results)};
      while (next_emit < cells.size() && remaining[next_emit] == 0) {
        if (options.on_row) options.on_row(rows[next_emit]);
        ++next_emit;
      }
    }
  };

  const unsigned threads = std::max(1U, options.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

}  // namespace sda
