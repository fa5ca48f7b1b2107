#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sda/topology.hpp"
#include "sda/types.hpp"

namespace sda {

/// Per-observer CF verdicts. flagged(observer, subject) is the observer's own
/// local classification; nothing is shared between observers.
class LocalBlacklists {
 public:
  LocalBlacklists() = default;
  explicit LocalBlacklists(std::size_t num_nodes)
      : n_(num_nodes), flags_(num_nodes * num_nodes, 0) {}

  [[nodiscard]] std::size_t num_nodes() const { return n_; }
  [[nodiscard]] bool flagged(NodeId observer, NodeId subject) const {
    return flags_[observer * n_ + subject] != 0;
  }
  void flag(NodeId observer, NodeId subject) { flags_[observer * n_ + subject] = 1; }
  /// True if any observer has flagged `subject`.
  [[nodiscard]] bool flagged_by_anyone(NodeId subject) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> flags_;
};

struct AggregatePacket {
  double value = 0.0;               // sum of accepted data
  std::size_t num_sda_used_nodes = 0;

  friend bool operator==(const AggregatePacket&, const AggregatePacket&) = default;
};

enum class RootDatum { kInclude, kExclude };

/// Bottom-up sum along the tree. Each node adds its own reading to the packets
/// of children it has not blacklisted; a rejected child's packet, and with it
/// that child's whole subtree, is dropped. Returns the packet formed at the root.
AggregatePacket aggregate_tree(const DGTree& tree, std::span<const double> beacons,
                               const LocalBlacklists& blacklists,
                               RootDatum root_datum = RootDatum::kInclude);

/// value / num_sda_used_nodes. Throws std::invalid_argument on an empty packet.
double sink_average(const AggregatePacket& packet);

}  // namespace sda
