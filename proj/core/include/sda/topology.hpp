#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sda/types.hpp"

namespace sda {

struct Edge {
  NodeId a = 0;  // a < b
  NodeId b = 0;
  double length = 0.0;  // m
  double let = 0.0;     // s, may be +inf

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Unit-disk graph over the current node positions.
class ConnectivityGraph {
 public:
  ConnectivityGraph() = default;
  ConnectivityGraph(std::size_t num_nodes, std::vector<Edge> edges);

  [[nodiscard]] std::size_t num_nodes() const { return num_nodes_; }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] bool has_edge(NodeId u, NodeId v) const;

 private:
  std::size_t num_nodes_ = 0;
  std::vector<Edge> edges_;  // sorted by (a, b)
};

/// Edges (a, b) with a < b whose endpoints are within trans_range; the
/// boundary distance == trans_range counts as connected.
ConnectivityGraph build_graph(std::span<const Point> positions, double trans_range,
                              std::span<const Velocity> velocities);

/// Time until two nodes moving at constant velocity drift farther apart than
/// trans_range. Returns +inf when their relative velocity is zero.
double let_weight(Point pos_a, Point pos_b, Velocity vel_a, Velocity vel_b, double trans_range);

using SpanningTree = std::vector<Edge>;

/// Kruskal over Euclidean length. std::nullopt when the graph is disconnected.
/// Ties go to the lexicographically smaller (a, b).
std::optional<SpanningTree> mst_tree(const ConnectivityGraph& graph);

/// Maximum total-LET spanning tree (Kruskal, LET descending, +inf first).
std::optional<SpanningTree> let_tree(const ConnectivityGraph& graph);

/// Rooted data-gathering tree.
struct DGTree {
  NodeId root = kNoNode;
  std::vector<NodeId> parent;                 // kNoNode for the root
  std::vector<std::vector<NodeId>> children;  // ascending node id
  std::vector<int> level;                     // hops from root
  std::vector<NodeId> bfs_order;              // root first
  Round build_round = 0;

  [[nodiscard]] std::size_t size() const { return parent.size(); }
  [[nodiscard]] bool is_leaf(NodeId n) const { return children[n].empty(); }
};

/// BFS from the sink over the spanning tree edges.
DGTree root_tree(const SpanningTree& tree, std::size_t num_nodes, NodeId sink);

/// True iff every parent-child link is within trans_range at these positions.
bool tree_alive(const DGTree& tree, std::span<const Point> positions, double trans_range);

}  // namespace sda
