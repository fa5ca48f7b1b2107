#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sda/types.hpp"

namespace sda {

enum class TreeType { kMST, kLET };

std::string_view to_string(TreeType type);
TreeType parse_tree_type(std::string_view text);

/// One experiment cell plus the fixed simulation constants.
struct ScenarioConfig {
  TreeType tree_type = TreeType::kMST;
  double trans_range = 25.0;     // m
  double vmax = 3.0;             // m/s
  std::size_t bw_size = 10;      // MaxBeaconWindowSize
  std::size_t tsb_size = 30;     // MaxTrustScoreBufferSize
  double trust_threshold = 0.7;
  double history_weight = 0.7;
  std::size_t max_cf_nodes = 20;
  double cf_prob = 0.005;
  Round cf_start_round = 10;

  std::size_t num_nodes = 100;   // sensor nodes; the sink is an extra node
  Area area{100.0, 100.0};
  Point sink_position{100.0, 100.0};
  double horizon = 1000.0;       // s
  int rounds_per_second = 4;
  double mean_data = 80.0;
  double stdd_data = 20.0;

  bool trust_enabled = true;      // false = ablation, no CF classification
  bool keys_for_blacklisted = true;  // run key work on locally blacklisted children

  [[nodiscard]] Round num_rounds() const;
  /// Throws ConfigError describing the first invalid field.
  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Applies one `key = value` setting. Unknown keys throw ConfigError.
void apply_setting(ScenarioConfig& config, std::string_view key, std::string_view value);

/// Reads `key = value` lines; '#' starts a comment. Unknown keys are rejected.
ScenarioConfig read_config(std::istream& in, ScenarioConfig base = {});
void write_config(std::ostream& out, const ScenarioConfig& config);

}  // namespace sda
