#include "sda/aggregation.hpp"

#include <stdexcept>

namespace sda {

bool LocalBlacklists::flagged_by_anyone(NodeId subject) const {
  for (std::size_t obs = 0; obs < n_; ++obs) {
    if (flags_[obs * n_ + subject]) return true;
  }
  return false;
}

AggregatePacket aggregate_tree(const DGTree& tree, std::span<const double> beacons,
                               const LocalBlacklists& blacklists, RootDatum root_datum) {
  const std::size_t n = tree.size();
  if (beacons.size() != n) throw std::invalid_argument("aggregate_tree: one beacon per node");
  if (blacklists.num_nodes() != n) throw std::invalid_argument("aggregate_tree: blacklist size");

  std::vector<AggregatePacket> packets(n);
  // Reverse BFS order visits every child before its parent.
  for (auto it = tree.bfs_order.rbegin(); it != tree.bfs_order.rend(); ++it) {
    const NodeId node = *it;
    AggregatePacket& own = packets[node];
    if (node != tree.root || root_datum == RootDatum::kInclude) {
      own.value = beacons[node];
      own.num_sda_used_nodes = 1;
    }
    for (NodeId child : tree.children[node]) {
      if (blacklists.flagged(node, child)) continue;
      own.value += packets[child].value;
      own.num_sda_used_nodes += packets[child].num_sda_used_nodes;
    }
  }
  return packets[tree.root];
}

double sink_average(const AggregatePacket& packet) {
  if (packet.num_sda_used_nodes == 0) throw std::invalid_argument("sink_average: empty packet");
  return packet.value / static_cast<double>(packet.num_sda_used_nodes);
}

}  // namespace sda
