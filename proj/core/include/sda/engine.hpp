#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sda/aggregation.hpp"
#include "sda/config.hpp"
#include "sda/keyproto.hpp"
#include "sda/mobility.hpp"
#include "sda/sensing.hpp"
#include "sda/topology.hpp"
#include "sda/trust.hpp"

namespace sda {

/// What happened in one round.
struct RoundRecord {
  Round round = 0;
  bool tree_rebuilt = false;
  bool has_tree = false;
  std::optional<AggregatePacket> sink_packet;
  std::size_t new_flags = 0;
};

/// Raw outcome of one (config, mobility profile) run.
struct ProfileResult {
  std::optional<double> median_detect_rounds;  // none when no CF node was detected
  std::optional<double> avg_sink_value;        // none when no round aggregated
  std::size_t false_positives = 0;
  std::size_t cf_nodes = 0;
  std::size_t detected_cf = 0;
  std::size_t undetected_cf = 0;
  std::size_t keys_established = 0;
  std::size_t keys_refreshed = 0;
  std::size_t key_failures = 0;
  std::size_t key_pairs_after_first_tree = 0;
  std::size_t key_pairs_final = 0;
  std::size_t rounds_without_tree = 0;
  std::size_t tree_builds = 0;
  std::size_t aggregation_rounds = 0;
  std::vector<Round> detection_deltas;  // ascending

  friend bool operator==(const ProfileResult&, const ProfileResult&) = default;
};

/// Supplies a node's reading for a round. The default draws from the
/// normal/CF distributions; tests substitute scripted sequences.
using DataSource = std::function<double(NodeId node, Round round, bool cf, Rng& rng)>;

/// Complete simulation state of one run. Sensor nodes are 0..num_nodes-1 and
/// follow the mobility trace; the sink is node num_nodes, fixed at
/// sink_position, never CF, and also acts as the key authority.
class World {
 public:
  World(ScenarioConfig config, MobilityTrace trace, std::uint64_t seed);

  /// Runs one data-gathering round: move, CFEnable, tree check / rebuild with
  /// key work, sensing and beacons, trust evaluation, aggregation.
  RoundRecord run_round(Round round);
  /// Runs rounds [next_round(), num_rounds()).
  void run_to_end();
  [[nodiscard]] ProfileResult finish() const;

  void set_data_source(DataSource source) { data_source_ = std::move(source); }
  void set_protocol_trace(std::ostream* out) { channel_.set_trace(out); }

  [[nodiscard]] const ScenarioConfig& config() const { return config_; }
  [[nodiscard]] NodeId sink() const { return sink_; }
  [[nodiscard]] std::size_t size() const { return sink_ + 1; }
  [[nodiscard]] Round next_round() const { return next_round_; }
  [[nodiscard]] const std::optional<DGTree>& tree() const { return tree_; }
  [[nodiscard]] const std::vector<Point>& positions() const { return positions_; }
  [[nodiscard]] const std::vector<double>& last_data() const { return data_; }
  [[nodiscard]] const CFState& cf_state() const { return cf_; }
  [[nodiscard]] const LocalBlacklists& blacklists() const { return blacklists_; }
  [[nodiscard]] const std::vector<KeyAgent>& agents() const { return agents_; }
  [[nodiscard]] const NeighborTrustState* trust_state(NodeId observer, NodeId subject) const;
  [[nodiscard]] std::optional<Round> first_detection(NodeId node) const { return detect_round_[node]; }

 private:
  void update_positions(Round round);
  void rebuild_tree(Round round);
  void exchange_beacons();
  std::size_t evaluate_trust(Round round);
  NeighborTrustState& state_for(NodeId observer, NodeId subject);

  ScenarioConfig config_;
  MobilityTrace trace_;
  NodeId sink_;
  DataGenParams data_params_;

  Rng data_rng_;
  Rng cf_rng_;
  Rng key_rng_;
  DataSource data_source_;

  std::vector<Point> positions_;
  std::vector<Velocity> velocities_;
  std::vector<double> data_;
  CFState cf_;
  std::optional<DGTree> tree_;

  std::vector<std::optional<NeighborTrustState>> trust_;  // observer * size + subject
  LocalBlacklists blacklists_;

  BaseStation bs_;
  std::vector<KeyAgent> agents_;
  ProtocolChannel channel_;

  Round next_round_ = 0;
  std::vector<std::optional<Round>> detect_round_;  // first flag while CF
  std::vector<bool> false_flagged_;                  // flagged while not CF
  double sink_average_sum_ = 0.0;
  std::size_t aggregation_rounds_ = 0;
  std::size_t rounds_without_tree_ = 0;
  std::size_t tree_builds_ = 0;
  KeyEstablishmentReport keys_;
  std::optional<std::size_t> key_pairs_after_first_tree_;
};

/// Mobility profile for one seed of a scenario, shared by every cell that
/// differs only in non-mobility parameters.
MobilityTrace profile_trace(const ScenarioConfig& config, std::uint64_t seed);

/// Full run over the scenario horizon.
ProfileResult run_profile(const ScenarioConfig& config, const MobilityTrace& trace,
                          std::uint64_t seed, std::ostream* protocol_trace = nullptr);

/// Median of a non-empty sample (mean of the two middle values when even).
double median(std::vector<double> values);

}  // namespace sda
