#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>

#include "../common/generators.hpp"
#include "../common/oracles.hpp"
#include "sda/topology.hpp"

namespace sda {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ConnectivityGraph static_graph(const std::vector<Point>& pts, double range) {
  const std::vector<Velocity> still(pts.size());
  return build_graph(pts, range, still);
}

TEST(Topology, EdgeAtExactRange) {
  EXPECT_TRUE(static_graph({{0, 0}, {25.0, 0}}, 25.0).has_edge(0, 1));
  EXPECT_FALSE(static_graph({{0, 0}, {25.000001, 0}}, 25.0).has_edge(0, 1));
}

TEST(Topology, EdgesMatchAllPairsCheck) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const auto pts = gen::random_points(5 + trial % 20, rng, 60.0);
    const auto graph = static_graph(pts, 25.0);
    std::size_t expected = 0;
    for (NodeId i = 0; i < pts.size(); ++i) {
      for (NodeId j = i + 1; j < pts.size(); ++j) {
        const double dx = pts[i].x - pts[j].x, dy = pts[i].y - pts[j].y;
        const bool near = std::sqrt(dx * dx + dy * dy) <= 25.0;
        expected += near;
        ASSERT_EQ(graph.has_edge(i, j), near);
        ASSERT_EQ(graph.has_edge(j, i), near);
      }
    }
    ASSERT_EQ(graph.edges().size(), expected);
  }
}

TEST(Topology, LetOneDimensional) {
  EXPECT_NEAR(let_weight({0, 0}, {20, 0}, {0, 0}, {1, 0}, 25.0), 5.0, 1e-12);
  EXPECT_EQ(let_weight({0, 0}, {20, 0}, {2, 1}, {2, 1}, 25.0), kInf);
}

TEST(Topology, LetMatchesStepping) {
  Rng rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const Point a{gen::uniform(rng, 0, 100), gen::uniform(rng, 0, 100)};
    const double ang = gen::uniform(rng, 0, 6.283185307179586);
    const double rad = gen::uniform(rng, 0, 25.0);
    const Point b{a.x + rad * std::cos(ang), a.y + rad * std::sin(ang)};
    const Velocity va{gen::uniform(rng, -10, 10), gen::uniform(rng, -10, 10)};
    const Velocity vb{gen::uniform(rng, -10, 10), gen::uniform(rng, -10, 10)};
    const double let = let_weight(a, b, va, vb, 25.0);
    const double stepped = oracle::let_by_stepping(a, b, va, vb, 25.0, 1000.0);
    if (!std::isfinite(stepped)) {
      EXPECT_GT(let, 999.0);
      continue;
    }
    EXPECT_NEAR(let, stepped, 2e-3) << "trial " << trial;
  }
}

TEST(Topology, PathGraphIsItsOwnTree) {
  const ConnectivityGraph g(3, {{0, 1, 1.0, 4.0}, {1, 2, 2.0, 3.0}});
  for (const auto& tree : {mst_tree(g), let_tree(g)}) {
    ASSERT_TRUE(tree);
    ASSERT_EQ(tree->size(), 2U);
  }
}

TEST(Topology, DisconnectedGraphHasNoTree) {
  const ConnectivityGraph g(4, {{0, 1, 1.0, 1.0}, {2, 3, 1.0, 1.0}});
  EXPECT_FALSE(mst_tree(g));
  EXPECT_FALSE(let_tree(g));
}

TEST(Topology, LetTreeDropsWeakestCycleEdge) {
  const ConnectivityGraph g(3, {{0, 1, 1.0, 10.0}, {1, 2, 1.0, 2.0}, {0, 2, 1.0, 7.0}});
  const auto tree = let_tree(g);
  ASSERT_TRUE(tree);
  std::set<std::pair<NodeId, NodeId>> kept;
  for (const Edge& e : *tree) kept.insert({e.a, e.b});
  EXPECT_EQ(kept, (std::set<std::pair<NodeId, NodeId>>{{0, 1}, {0, 2}}));
}

TEST(Topology, InfiniteLetTiesBreakById) {
  const ConnectivityGraph g(3, {{1, 2, 1.0, kInf}, {0, 2, 1.0, kInf}, {0, 1, 1.0, kInf}});
  const auto tree = let_tree(g);
  ASSERT_TRUE(tree);
  EXPECT_EQ((*tree)[0].a, 0U);
  EXPECT_EQ((*tree)[0].b, 1U);
  EXPECT_EQ((*tree)[1].a, 0U);
  EXPECT_EQ((*tree)[1].b, 2U);
}

TEST(Topology, TreesOptimalAgainstEnumeration) {
  Rng rng(31);
  int checked = 0;
  while (checked < 400) {
    const std::size_t n = 6;
    std::vector<Edge> edges;
    std::set<std::pair<NodeId, NodeId>> used;
    const std::size_t m = 5 + gen::index(rng, 4);  // 5..8
    while (edges.size() < m) {
      NodeId a = static_cast<NodeId>(gen::index(rng, n)), b = static_cast<NodeId>(gen::index(rng, n));
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      if (!used.insert({a, b}).second) continue;
      const double let = gen::index(rng, 10) == 0 ? kInf : gen::uniform(rng, 0, 100);
      edges.push_back({a, b, gen::uniform(rng, 0, 25), let});
    }
    const auto best = oracle::enumerate_spanning_trees(n, edges);
    const ConnectivityGraph g(n, edges);
    const auto mst = mst_tree(g);
    const auto lt = let_tree(g);
    ASSERT_EQ(best.found, mst.has_value());
    ASSERT_EQ(best.found, lt.has_value());
    if (!best.found) continue;
    double len = 0, let = 0;
    for (const Edge& e : *mst) len += e.length;
    for (const Edge& e : *lt) let += e.let;
    EXPECT_NEAR(len, best.min_length, 1e-9);
    if (std::isinf(best.max_let)) {
      EXPECT_TRUE(std::isinf(let));
    } else {
      EXPECT_NEAR(let, best.max_let, 1e-9);
    }
    ++checked;
  }
}

TEST(Topology, StarRootedAtSink) {
  const SpanningTree star{{0, 1, 1, 1}, {0, 2, 1, 1}, {0, 3, 1, 1}};
  const DGTree t = root_tree(star, 4, 0);
  EXPECT_EQ(t.root, 0U);
  EXPECT_EQ(t.children[0], (std::vector<NodeId>{1, 2, 3}));
  for (NodeId n = 1; n < 4; ++n) {
    EXPECT_EQ(t.level[n], 1);
    EXPECT_TRUE(t.is_leaf(n));
    EXPECT_EQ(t.parent[n], 0U);
  }
  EXPECT_EQ(t.parent[0], kNoNode);
}

TEST(Topology, PathRootedAtSink) {
  const DGTree t = root_tree({{0, 1, 1, 1}, {1, 2, 1, 1}}, 3, 0);
  EXPECT_EQ(t.level[1], 1);
  EXPECT_FALSE(t.is_leaf(1));
  EXPECT_EQ(t.level[2], 2);
  EXPECT_TRUE(t.is_leaf(2));
}

TEST(Topology, RootTreeRejectsNonSpanning) {
  EXPECT_THROW(root_tree({{0, 1, 1, 1}}, 3, 0), std::invalid_argument);
}

TEST(Topology, LevelsEqualHopDistances) {
  Rng rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + gen::index(rng, 20);
    const auto edges = gen::random_tree(n, rng);
    const NodeId sink = static_cast<NodeId>(gen::index(rng, n));
    const DGTree t = root_tree(edges, n, sink);
    const auto hops = oracle::hop_distances(n, edges, sink);
    std::size_t links = 0;
    for (NodeId v = 0; v < n; ++v) {
      ASSERT_EQ(t.level[v], hops[v]);
      if (v == sink) continue;
      ++links;
      ASSERT_EQ(t.level[v], t.level[t.parent[v]] + 1);
    }
    ASSERT_EQ(links, n - 1);
    ASSERT_EQ(t.bfs_order.size(), n);
    ASSERT_EQ(t.bfs_order.front(), sink);
  }
}

TEST(Topology, TreeAliveMatchesEdgeRecheck) {
  Rng rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    auto pts = gen::random_points(30, rng, 50.0);
    const auto graph = static_graph(pts, 25.0);
    const auto mst = mst_tree(graph);
    if (!mst) continue;
    const DGTree t = root_tree(*mst, pts.size(), 0);
    EXPECT_TRUE(tree_alive(t, pts, 25.0));
    for (auto& p : pts) p = {p.x + gen::uniform(rng, -3, 3), p.y + gen::uniform(rng, -3, 3)};
    bool all = true;
    for (const Edge& e : *mst) all = all && distance(pts[e.a], pts[e.b]) <= 25.0;
    EXPECT_EQ(tree_alive(t, pts, 25.0), all);
  }
}

TEST(Topology, StretchedEdgeKillsTree) {
  std::vector<Point> pts{{0, 0}, {10, 0}, {20, 0}};
  const DGTree t = root_tree(*mst_tree(static_graph(pts, 12.0)), 3, 0);
  EXPECT_TRUE(tree_alive(t, pts, 12.0));
  pts[2].x = 23.0;
  EXPECT_FALSE(tree_alive(t, pts, 12.0));
}

}  // namespace
}  // namespace sda
