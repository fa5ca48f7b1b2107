#include "sda/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace sda {

namespace {

enum RngStream : std::uint64_t { kMobility = 0, kData = 1, kCF = 2, kKeys = 3 };

std::vector<Key128> make_bs_keys(std::size_t count, Rng& rng) {
  std::vector<Key128> keys;
  keys.reserve(count);
  for (std::size_t i = 0; i < count; ++i) keys.push_back(random_key(rng));
  return keys;
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

World::World(ScenarioConfig config, MobilityTrace trace, std::uint64_t seed)
    : config_(std::move(config)),
      trace_(std::move(trace)),
      sink_(static_cast<NodeId>(config_.num_nodes)),
      data_params_{config_.mean_data, config_.stdd_data, 5.0},
      data_rng_(derive_seed(seed, kData)),
      cf_rng_(derive_seed(seed, kCF)),
      key_rng_(derive_seed(seed, kKeys)),
      positions_(config_.num_nodes + 1),
      velocities_(config_.num_nodes + 1),
      data_(config_.num_nodes + 1, 0.0),
      cf_(config_.num_nodes, config_.max_cf_nodes, config_.cf_prob, config_.cf_start_round),
      trust_((config_.num_nodes + 1) * (config_.num_nodes + 1)),
      blacklists_(config_.num_nodes + 1),
      bs_(make_bs_keys(config_.num_nodes + 1, key_rng_)),
      detect_round_(config_.num_nodes + 1),
      false_flagged_(config_.num_nodes + 1, false) {
  config_.validate();
  if (trace_.num_nodes() != config_.num_nodes) {
    throw std::invalid_argument("mobility trace node count does not match num_nodes");
  }
  const double last_time =
      static_cast<double>(config_.num_rounds() - 1) / config_.rounds_per_second;
  if (trace_.horizon() < last_time) {
    throw std::invalid_argument("mobility trace horizon shorter than the simulated horizon");
  }
  agents_.reserve(size());
  for (NodeId n = 0; n < size(); ++n) agents_.emplace_back(n, bs_.key_for(n));
  data_source_ = [this](NodeId, Round, bool cf, Rng& rng) {
    return generate_datum(cf, data_params_, rng);
  };
}

const NeighborTrustState* World::trust_state(NodeId observer, NodeId subject) const {
  const auto& slot = trust_[observer * size() + subject];
  return slot ? &*slot : nullptr;
}

NeighborTrustState& World::state_for(NodeId observer, NodeId subject) {
  auto& slot = trust_[observer * size() + subject];
  if (!slot) slot.emplace(config_.bw_size, config_.tsb_size);
  return *slot;
}

void World::update_positions(Round round) {
  const double t = static_cast<double>(round) / config_.rounds_per_second;
  for (NodeId n = 0; n < config_.num_nodes; ++n) {
    positions_[n] = trace_.position_at(n, t);
    velocities_[n] = trace_.velocity_at(n, t);
  }
  positions_[sink_] = config_.sink_position;
  velocities_[sink_] = {};
}

void World::rebuild_tree(Round round) {
  const ConnectivityGraph graph = build_graph(positions_, config_.trans_range, velocities_);
  const auto spanning =
      config_.tree_type == TreeType::kMST ? mst_tree(graph) : let_tree(graph);
  if (!spanning) return;

  tree_ = root_tree(*spanning, size(), sink_);
  tree_->build_round = round;
  ++tree_builds_;

  channel_.set_round(round);
  std::function<bool(NodeId, NodeId)> skip;
  if (!config_.keys_for_blacklisted) {
    skip = [this](NodeId parent, NodeId child) { return blacklists_.flagged(parent, child); };
  }
  keys_ += run_key_establishment_for_tree(*tree_, agents_, bs_, channel_, key_rng_, skip);
  if (!key_pairs_after_first_tree_) key_pairs_after_first_tree_ = count_key_pairs(agents_);
}

void World::exchange_beacons() {
  const double range = config_.trans_range;
  for (NodeId i = 0; i < size(); ++i) {
    for (NodeId j = i + 1; j < size(); ++j) {
      if (distance(positions_[i], positions_[j]) > range) continue;
      // A blacklisted neighbor's beacons are dropped by that observer.
      if (!blacklists_.flagged(i, j)) state_for(i, j).window.record(data_[j]);
      if (!blacklists_.flagged(j, i)) state_for(j, i).window.record(data_[i]);
    }
  }
}

std::size_t World::evaluate_trust(Round round) {
  std::size_t new_flags = 0;
  const DGTree& tree = *tree_;
  for (NodeId child : tree.bfs_order) {
    const NodeId parent = tree.parent[child];
    if (parent == kNoNode || blacklists_.flagged(parent, child)) continue;
    NeighborTrustState& st = state_for(parent, child);
    st.scores.append(raw_trust_score(st.window, data_[child]));
    const auto est = est_avg_trust(st.scores, config_.history_weight);
    if (!est) continue;
    st.assessment = check_cf_status(st.assessment, *est, config_.trust_threshold, round);
    if (!st.assessment.is_cf_locally) continue;

    blacklists_.flag(parent, child);
    ++new_flags;
    const bool is_cf = child < config_.num_nodes && cf_.is_cf(child);
    if (is_cf) {
      if (!detect_round_[child]) detect_round_[child] = round;
    } else {
      false_flagged_[child] = true;
    }
  }
  return new_flags;
}

RoundRecord World::run_round(Round round) {
  if (round != next_round_) throw std::logic_error("rounds must be run in order");
  ++next_round_;
  RoundRecord record;
  record.round = round;

  update_positions(round);
  cf_enable(round, cf_, cf_rng_);

  if (tree_ && !tree_alive(*tree_, positions_, config_.trans_range)) {
    // Every parent-child association of the dissolved tree ends here.
    for (NodeId child = 0; child < size(); ++child) {
      const NodeId parent = tree_->parent[child];
      if (parent == kNoNode) continue;
      if (auto& slot = trust_[parent * size() + child]) slot->scores.roll_association();
    }
    tree_.reset();
  }
  if (!tree_) {
    rebuild_tree(round);
    record.tree_rebuilt = tree_.has_value();
  }

  for (NodeId n = 0; n < size(); ++n) {
    const bool cf = n < config_.num_nodes && cf_.is_cf(n);
    data_[n] = data_source_(n, round, cf, data_rng_);
  }
  exchange_beacons();

  if (!tree_) {
    ++rounds_without_tree_;
    return record;
  }
  record.has_tree = true;
  if (config_.trust_enabled) record.new_flags = evaluate_trust(round);

  const AggregatePacket packet = aggregate_tree(*tree_, data_, blacklists_);
  sink_average_sum_ += sink_average(packet);
  ++aggregation_rounds_;
  record.sink_packet = packet;
  return record;
}

void World::run_to_end() {
  const Round total = config_.num_rounds();
  while (next_round_ < total) run_round(next_round_);
}

ProfileResult World::finish() const {
  ProfileResult result;
  std::vector<double> deltas;
  for (NodeId n = 0; n < config_.num_nodes; ++n) {
    if (false_flagged_[n]) ++result.false_positives;
    if (!cf_.is_cf(n)) continue;
    ++result.cf_nodes;
    if (detect_round_[n]) {
      const Round delta = *detect_round_[n] - *cf_.cf_onset_round[n];
      result.detection_deltas.push_back(delta);
      deltas.push_back(static_cast<double>(delta));
    }
  }
  std::sort(result.detection_deltas.begin(), result.detection_deltas.end());
  result.detected_cf = deltas.size();
  result.undetected_cf = result.cf_nodes - result.detected_cf;
  if (!deltas.empty()) result.median_detect_rounds = median(std::move(deltas));
  if (aggregation_rounds_ > 0) {
    result.avg_sink_value = sink_average_sum_ / static_cast<double>(aggregation_rounds_);
  }
  result.keys_established = keys_.established;
  result.keys_refreshed = keys_.refreshed;
  result.key_failures = keys_.failures;
  result.key_pairs_after_first_tree = key_pairs_after_first_tree_.value_or(0);
  result.key_pairs_final = count_key_pairs(agents_);
  result.rounds_without_tree = rounds_without_tree_;
  result.tree_builds = tree_builds_;
  result.aggregation_rounds = aggregation_rounds_;
  return result;
}

MobilityTrace profile_trace(const ScenarioConfig& config, std::uint64_t seed) {
  MobilityParams params;
  params.num_nodes = config.num_nodes;
  params.area = config.area;
  params.vmax = config.vmax;
  params.horizon = config.horizon;
  return generate_trace(derive_seed(seed, kMobility), params);
}

ProfileResult run_profile(const ScenarioConfig& config, const MobilityTrace& trace,
                          std::uint64_t seed, std::ostream* protocol_trace) {
  World world(config, trace, seed);
  world.set_protocol_trace(protocol_trace);
  world.run_to_end();
  return world.finish();
}

}  // namespace sda
