#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "sda/types.hpp"

namespace sda {

/// One straight-line Random Waypoint leg. A stationary node is represented by
/// a single leg with start == target and speed 0.
struct Leg {
  Point start;
  Point target;
  double speed = 0.0;       // m/s
  double start_time = 0.0;  // s

  [[nodiscard]] double duration() const;
  [[nodiscard]] double end_time() const { return start_time + duration(); }
  friend bool operator==(const Leg&, const Leg&) = default;
};

struct MobilityParams {
  std::size_t num_nodes = 100;
  Area area;
  double vmax = 3.0;      // m/s
  double horizon = 1000;  // s
};

class MobilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Piecewise-linear trajectories for every node over [0, horizon].
class MobilityTrace {
 public:
  MobilityTrace() = default;
  MobilityTrace(std::vector<std::vector<Leg>> legs, double horizon, double vmax,
                std::uint64_t seed);

  [[nodiscard]] std::size_t num_nodes() const { return legs_.size(); }
  [[nodiscard]] double horizon() const { return horizon_; }
  [[nodiscard]] double vmax() const { return vmax_; }
  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] const std::vector<Leg>& legs(NodeId node) const { return legs_.at(node); }

  /// Throws MobilityError when t is outside [0, horizon] or node is unknown.
  [[nodiscard]] Point position_at(NodeId node, double t) const;
  [[nodiscard]] Velocity velocity_at(NodeId node, double t) const;

  friend bool operator==(const MobilityTrace&, const MobilityTrace&) = default;

 private:
  [[nodiscard]] const Leg& active_leg(NodeId node, double t) const;

  std::vector<std::vector<Leg>> legs_;
  double horizon_ = 0.0;
  double vmax_ = 0.0;
  std::uint64_t seed_ = 0;
};

/// Random Waypoint without pause times. Speeds are drawn from (0, vmax];
/// vmax == 0 yields stationary nodes.
MobilityTrace generate_trace(std::uint64_t seed, const MobilityParams& params);

// Trace file: header `num_nodes horizon vmax seed`, then one leg per line
// `node_id start_time x0 y0 x1 y1 speed`. Doubles are written round-trip exact.
void write_trace(std::ostream& out, const MobilityTrace& trace);
MobilityTrace read_trace(std::istream& in);

}  // namespace sda
