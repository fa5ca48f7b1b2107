#include "sda/topology.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace sda {

ConnectivityGraph::ConnectivityGraph(std::size_t num_nodes, std::vector<Edge> edges)
    : num_nodes_(num_nodes), edges_(std::move(edges)) {
  for (auto& e : edges_) {
    if (e.a > e.b) std::swap(e.a, e.b);
    if (e.b >= num_nodes_ || e.a == e.b) throw std::invalid_argument("bad edge endpoints");
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& l, const Edge& r) { return std::tie(l.a, l.b) < std::tie(r.a, r.b); });
}

bool ConnectivityGraph::has_edge(NodeId u, NodeId v) const {
  if (u > v) std::swap(u, v);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{u, v},
                             [](const Edge& e, const std::pair<NodeId, NodeId>& key) {
                               return std::tie(e.a, e.b) < std::tie(key.first, key.second);
                             });
  return it != edges_.end() && it->a == u && it->b == v;
}

double let_weight(Point pos_a, Point pos_b, Velocity vel_a, Velocity vel_b, double trans_range) {
  const double a = vel_a.vx - vel_b.vx;
  const double c = vel_a.vy - vel_b.vy;
  const double b = pos_a.x - pos_b.x;
  const double d = pos_a.y - pos_b.y;
  const double speed_sq = a * a + c * c;
  if (speed_sq == 0.0) return std::numeric_limits<double>::infinity();
  const double cross = a * d - b * c;
  const double disc = std::max(0.0, speed_sq * trans_range * trans_range - cross * cross);
  return std::max(0.0, (-(a * b + c * d) + std::sqrt(disc)) / speed_sq);
}

ConnectivityGraph build_graph(std::span<const Point> positions, double trans_range,
                              std::span<const Velocity> velocities) {
  if (velocities.size() != positions.size()) {
    throw std::invalid_argument("build_graph: positions/velocities size mismatch");
  }
  const std::size_t n = positions.size();
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      const double len = distance(positions[i], positions[j]);
      if (len <= trans_range) {
        edges.push_back({i, j, len,
                         let_weight(positions[i], positions[j], velocities[i], velocities[j],
                                    trans_range)});
      }
    }
  }
  return ConnectivityGraph(n, std::move(edges));
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), NodeId{0});
  }

  NodeId find(NodeId x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(NodeId x, NodeId y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    if (rank_[x] < rank_[y]) std::swap(x, y);
    parent_[y] = x;
    if (rank_[x] == rank_[y]) ++rank_[x];
    return true;
  }

 private:
  std::vector<NodeId> parent_;
  std::vector<int> rank_;
};

template <typename Better>
std::optional<SpanningTree> kruskal(const ConnectivityGraph& graph, Better better) {
  const std::size_t n = graph.num_nodes();
  if (n == 0) return std::nullopt;
  std::vector<Edge> order = graph.edges();
  std::stable_sort(order.begin(), order.end(), [&](const Edge& l, const Edge& r) {
    if (better(l, r)) return true;
    if (better(r, l)) return false;
    return std::tie(l.a, l.b) < std::tie(r.a, r.b);
  });
  DisjointSets sets(n);
  SpanningTree tree;
  tree.reserve(n - 1);
  for (const Edge& e : order) {
    if (sets.unite(e.a, e.b)) {
      tree.push_back(e);
      if (tree.size() == n - 1) break;
    }
  }
  if (tree.size() != n - 1) return std::nullopt;
  return tree;
}

}  // namespace

std::optional<SpanningTree> mst_tree(const ConnectivityGraph& graph) {
  return kruskal(graph, [](const Edge& l, const Edge& r) { return l.length < r.length; });
}

std::optional<SpanningTree> let_tree(const ConnectivityGraph& graph) {
  return kruskal(graph, [](const Edge& l, const Edge& r) { return l.let > r.let; });
}

DGTree root_tree(const SpanningTree& tree, std::size_t num_nodes, NodeId sink) {
  if (sink >= num_nodes) throw std::invalid_argument("root_tree: sink out of range");
  std::vector<std::vector<NodeId>> adjacency(num_nodes);
  for (const Edge& e : tree) {
    adjacency.at(e.a).push_back(e.b);
    adjacency.at(e.b).push_back(e.a);
  }
  for (auto& list : adjacency) std::sort(list.begin(), list.end());

  DGTree out;
  out.root = sink;
  out.parent.assign(num_nodes, kNoNode);
  out.children.assign(num_nodes, {});
  out.level.assign(num_nodes, -1);
  out.bfs_order.reserve(num_nodes);

  std::deque<NodeId> frontier{sink};
  out.level[sink] = 0;
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop_front();
    out.bfs_order.push_back(u);
    for (NodeId v : adjacency[u]) {
      if (out.level[v] >= 0) continue;
      out.level[v] = out.level[u] + 1;
      out.parent[v] = u;
      out.children[u].push_back(v);
      frontier.push_back(v);
    }
  }
  if (out.bfs_order.size() != num_nodes) {
    throw std::invalid_argument("root_tree: edges do not span all nodes");
  }
  return out;
}

bool tree_alive(const DGTree& tree, std::span<const Point> positions, double trans_range) {
  for (NodeId v = 0; v < tree.size(); ++v) {
    const NodeId p = tree.parent[v];
    if (p == kNoNode) continue;
    if (distance(positions[p], positions[v]) > trans_range) return false;
  }
  return true;
}

}  // namespace sda
