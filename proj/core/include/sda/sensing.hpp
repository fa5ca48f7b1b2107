#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sda/types.hpp"

namespace sda {

struct DataGenParams {
  double mean_data = 80.0;
  double stdd_data = 20.0;
  double cf_multiplier = 5.0;
};

/// Normal nodes report mean +/- stdd*x with x ~ U[0,1]; CF nodes report
/// U[0, cf_multiplier * mean].
double generate_datum(bool cf, const DataGenParams& params, Rng& rng);

/// Which nodes are compromised or faulty, and since when. Flags only ever go
/// from false to true.
struct CFState {
  std::vector<bool> cf_flags;
  std::vector<std::optional<Round>> cf_onset_round;
  std::size_t max_cf_nodes = 0;
  double cf_prob = 0.005;
  Round start_round = 10;

  CFState() = default;
  CFState(std::size_t num_nodes, std::size_t max_cf, double prob, Round start = 10);

  [[nodiscard]] std::size_t count() const;
  [[nodiscard]] bool is_cf(NodeId n) const { return cf_flags[n]; }
};

/// One CFEnable pass: every non-CF node, in ascending id order, turns CF when a
/// draw from (0,1] is <= cf_prob. Flips beyond max_cf_nodes are refused.
/// No-op before start_round.
void cf_enable(Round round, CFState& state, Rng& rng);

/// FIFO of the most recent beacon values received from one neighbor.
class BeaconWindow {
 public:
  explicit BeaconWindow(std::size_t capacity = 10);

  void record(double value);

  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] std::size_t capacity() const { return capacity_; }
  [[nodiscard]] bool empty() const { return values_.empty(); }
  [[nodiscard]] std::span<const double> values() const { return values_; }

 private:
  std::size_t capacity_;
  std::vector<double> values_;  // oldest first
};

}  // namespace sda
