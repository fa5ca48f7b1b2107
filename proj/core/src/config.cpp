#include "sda/config.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace sda {

std::string_view to_string(TreeType type) { return type == TreeType::kMST ? "MST" : "LET"; }

TreeType parse_tree_type(std::string_view text) {
  if (text == "MST" || text == "mst") return TreeType::kMST;
  if (text == "LET" || text == "let") return TreeType::kLET;
  throw ConfigError("unknown tree type '" + std::string(text) + "' (expected MST or LET)");
}

Round ScenarioConfig::num_rounds() const {
  return static_cast<Round>(std::llround(horizon * rounds_per_second));
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("invalid config: " + what); };
  if (!(trans_range > 0)) fail("trans_range must be > 0");
  if (!(vmax >= 0)) fail("vmax must be >= 0");
  if (bw_size < 1) fail("bw_size must be >= 1");
  if (tsb_size < 1) fail("tsb_size must be >= 1");
  if (!(trust_threshold > 0 && trust_threshold <= 1)) fail("trust_threshold must be in (0,1]");
  if (!(history_weight >= 0 && history_weight <= 1)) fail("history_weight must be in [0,1]");
  if (max_cf_nodes > num_nodes) fail("max_cf_nodes exceeds num_nodes");
  if (!(cf_prob >= 0 && cf_prob <= 1)) fail("cf_prob must be in [0,1]");
  if (cf_start_round < 0) fail("cf_start_round must be >= 0");
  if (num_nodes < 1 || num_nodes >= 0xFFFE) fail("num_nodes must be in [1, 65533]");
  if (!(area.width > 0 && area.height > 0)) fail("area dimensions must be > 0");
  if (!area.contains(sink_position)) fail("sink must lie inside the area");
  if (!(horizon > 0)) fail("horizon must be > 0");
  if (rounds_per_second < 1) fail("rounds_per_second must be >= 1");
  if (!(mean_data > 0)) fail("mean_data must be > 0");
  if (!(stdd_data >= 0)) fail("stdd_data must be >= 0");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view value) {
  try {
    std::size_t used = 0;
    const std::string text(value);
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + std::string(key) + "': not a number: '" + std::string(value) + "'");
}

template <typename Int>
Int to_int(std::string_view key, std::string_view value) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("config key '" + std::string(key) + "': not an integer: '" +
                      std::string(value) + "'");
  }
  return v;
}

bool to_bool(std::string_view key, std::string_view value) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw ConfigError("config key '" + std::string(key) + "': expected on/off");
}

}  // namespace

void apply_setting(ScenarioConfig& c, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "tree_type") c.tree_type = parse_tree_type(value);
  else if (key == "trans_range") c.trans_range = to_double(key, value);
  else if (key == "vmax") c.vmax = to_double(key, value);
  else if (key == "bw_size") c.bw_size = to_int<std::size_t>(key, value);
  else if (key == "tsb_size") c.tsb_size = to_int<std::size_t>(key, value);
  else if (key == "trust_threshold") c.trust_threshold = to_double(key, value);
  else if (key == "history_weight") c.history_weight = to_double(key, value);
  else if (key == "max_cf_nodes") c.max_cf_nodes = to_int<std::size_t>(key, value);
  else if (key == "cf_prob") c.cf_prob = to_double(key, value);
  else if (key == "cf_start_round") c.cf_start_round = to_int<Round>(key, value);
  else if (key == "num_nodes") c.num_nodes = to_int<std::size_t>(key, value);
  else if (key == "area_width") c.area.width = to_double(key, value);
  else if (key == "area_height") c.area.height = to_double(key, value);
  else if (key == "sink_x") c.sink_position.x = to_double(key, value);
  else if (key == "sink_y") c.sink_position.y = to_double(key, value);
  else if (key == "horizon") c.horizon = to_double(key, value);
  else if (key == "rounds_per_second") c.rounds_per_second = to_int<int>(key, value);
  else if (key == "mean_data") c.mean_data = to_double(key, value);
  else if (key == "stdd_data") c.stdd_data = to_double(key, value);
  else if (key == "trust") c.trust_enabled = to_bool(key, value);
  else if (key == "keys_for_blacklisted") c.keys_for_blacklisted = to_bool(key, value);
  else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

ScenarioConfig read_config(std::istream& in, ScenarioConfig base) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    apply_setting(base, view.substr(0, eq), view.substr(eq + 1));
  }
  base.validate();
  return base;
}

void write_config(std::ostream& out, const ScenarioConfig& c) {
  const auto old_precision = out.precision(17);
  out << "tree_type = " << to_string(c.tree_type) << '\n'
      << "trans_range = " << c.trans_range << '\n'
      << "vmax = " << c.vmax << '\n'
      << "bw_size = " << c.bw_size << '\n'
      << "tsb_size = " << c.tsb_size << '\n'
      << "trust_threshold = " << c.trust_threshold << '\n'
      << "history_weight = " << c.history_weight << '\n'
      << "max_cf_nodes = " << c.max_cf_nodes << '\n'
      << "cf_prob = " << c.cf_prob << '\n'
      << "cf_start_round = " << c.cf_start_round << '\n'
      << "num_nodes = " << c.num_nodes << '\n'
      << "area_width = " << c.area.width << '\n'
      << "area_height = " << c.area.height << '\n'
      << "sink_x = " << c.sink_position.x << '\n'
      << "sink_y = " << c.sink_position.y << '\n'
      << "horizon = " << c.horizon << '\n'
      << "rounds_per_second = " << c.rounds_per_second << '\n'
      << "mean_data = " << c.mean_data << '\n'
      << "stdd_data = " << c.stdd_data << '\n'
      << "trust = " << (c.trust_enabled ? "on" : "off") << '\n'
      << "keys_for_blacklisted = " << (c.keys_for_blacklisted ? "on" : "off") << '\n';
  out.precision(old_precision);
}

}  // namespace sda
