#include <benchmark/benchmark.h>

#include "sda/engine.hpp"
#include "sda/keyproto.hpp"
#include "sda/topology.hpp"
#include "sda/trust.hpp"

namespace {

using namespace sda;

void BM_RawTrustScore(benchmark::State& state) {
  Rng rng(1);
  std::vector<double> w(static_cast<std::size_t>(state.range(0)));
  for (auto& v : w) v = 60 + 40 * uniform01(rng);
  for (auto _ : state) benchmark::DoNotOptimize(raw_trust_score(w, w.back()));
}
BENCHMARK(BM_RawTrustScore)->Arg(10)->Arg(50);

void BM_GraphAndTree(benchmark::State& state) {
  Rng rng(2);
  std::vector<Point> pts(101);
  std::vector<Velocity> vel(101);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    pts[i] = {100 * uniform01(rng), 100 * uniform01(rng)};
    vel[i] = {10 * uniform01(rng) - 5, 10 * uniform01(rng) - 5};
  }
  const bool let = state.range(0) == 1;
  for (auto _ : state) {
    const auto g = build_graph(pts, 25.0, vel);
    benchmark::DoNotOptimize(let ? let_tree(g) : mst_tree(g));
  }
}
BENCHMARK(BM_GraphAndTree)->Arg(0)->Arg(1);

void BM_KeyRefresh(benchmark::State& state) {
  Rng rng(3);
  const Key128 ka = random_key(rng), kc = random_key(rng);
  BaseStation bs({ka, kc});
  KeyAgent agg(0, ka), child(1, kc);
  const NodeId kids[] = {1};
  auto fwd = agg.on_seed(*bs.handle_notification(*agg.begin_establishment(kids, rng), rng));
  child.on_new_key_ack(*agg.on_new_pairwise_key(*child.on_seed_component(fwd[0], rng)));
  for (auto _ : state) {
    auto resp = child.on_refresh_request(*agg.begin_refresh(1, rng), rng);
    benchmark::DoNotOptimize(child.on_refresh_ack(*agg.on_refresh_response(*resp)));
  }
}
BENCHMARK(BM_KeyRefresh);

void BM_Round(benchmark::State& state) {
  ScenarioConfig c;
  c.vmax = static_cast<double>(state.range(0));
  c.tree_type = state.range(1) ? TreeType::kLET : TreeType::kMST;
  World w(c, profile_trace(c, 1), 1);
  Round r = 0;
  for (auto _ : state) {
    if (r == c.num_rounds()) {
      state.PauseTiming();
      w = World(c, profile_trace(c, 1), 1);
      r = 0;
      state.ResumeTiming();
    }
    benchmark::DoNotOptimize(w.run_round(r++));
  }
}
BENCHMARK(BM_Round)->Args({3, 0})->Args({10, 0})->Args({10, 1});

}  // namespace

BENCHMARK_MAIN();
