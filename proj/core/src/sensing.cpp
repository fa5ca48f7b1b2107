#include "sda/sensing.hpp"

#include <algorithm>
#include <stdexcept>

namespace sda {

double generate_datum(bool cf, const DataGenParams& params, Rng& rng) {
  if (cf) return uniform01(rng) * params.cf_multiplier * params.mean_data;
  const double x = uniform01(rng);
  const bool negative = (rng() & 1U) != 0;
  return negative ? params.mean_data - params.stdd_data * x : params.mean_data + params.stdd_data * x;
}

CFState::CFState(std::size_t num_nodes, std::size_t max_cf, double prob, Round start)
    : cf_flags(num_nodes, false),
      cf_onset_round(num_nodes),
      max_cf_nodes(max_cf),
      cf_prob(prob),
      start_round(start) {
  if (!(prob >= 0.0 && prob <= 1.0)) throw std::invalid_argument("cf_prob must be in [0,1]");
}

std::size_t CFState::count() const {
  return static_cast<std::size_t>(std::count(cf_flags.begin(), cf_flags.end(), true));
}

void cf_enable(Round round, CFState& state, Rng& rng) {
  if (round < state.start_round) return;
  std::size_t active = state.count();
  if (active >= state.max_cf_nodes) return;
  for (NodeId n = 0; n < state.cf_flags.size(); ++n) {
    if (state.cf_flags[n]) continue;
    const bool flips = uniform01_open_low(rng) <= state.cf_prob;
    if (flips && active < state.max_cf_nodes) {
      state.cf_flags[n] = true;
      state.cf_onset_round[n] = round;
      ++active;
    }
  }
}

BeaconWindow::BeaconWindow(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("beacon window capacity must be >= 1");
  values_.reserve(capacity);
}

void BeaconWindow::record(double value) {
  if (values_.size() == capacity_) values_.erase(values_.begin());
  values_.push_back(value);
}

}  // namespace sda
