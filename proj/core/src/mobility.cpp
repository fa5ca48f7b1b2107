#include "sda/mobility.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace sda {

double Leg::duration() const {
  if (speed <= 0.0) return std::numeric_limits<double>::infinity();
  return distance(start, target) / speed;
}

MobilityTrace::MobilityTrace(std::vector<std::vector<Leg>> legs, double horizon, double vmax,
                             std::uint64_t seed)
    : legs_(std::move(legs)), horizon_(horizon), vmax_(vmax), seed_(seed) {
  for (const auto& node_legs : legs_) {
    if (node_legs.empty()) throw MobilityError("every node needs at least one leg");
  }
}

const Leg& MobilityTrace::active_leg(NodeId node, double t) const {
  if (node >= legs_.size()) throw MobilityError("unknown node id " + std::to_string(node));
  if (!(t >= 0.0 && t <= horizon_)) {
    throw MobilityError("time " + std::to_string(t) + " outside trace horizon");
  }
  const auto& node_legs = legs_[node];
  // Last leg whose start_time <= t.
  auto it = std::upper_bound(node_legs.begin(), node_legs.end(), t,
                             [](double time, const Leg& leg) { return time < leg.start_time; });
  if (it != node_legs.begin()) --it;
  return *it;
}

Point MobilityTrace::position_at(NodeId node, double t) const {
  const Leg& leg = active_leg(node, t);
  const double dur = leg.duration();
  if (!(dur > 0.0) || std::isinf(dur)) return leg.start;
  const double frac = std::clamp((t - leg.start_time) / dur, 0.0, 1.0);
  return {leg.start.x + frac * (leg.target.x - leg.start.x),
          leg.start.y + frac * (leg.target.y - leg.start.y)};
}

Velocity MobilityTrace::velocity_at(NodeId node, double t) const {
  const Leg& leg = active_leg(node, t);
  const double len = distance(leg.start, leg.target);
  if (leg.speed <= 0.0 || len <= 0.0) return {};
  return {leg.speed * (leg.target.x - leg.start.x) / len,
          leg.speed * (leg.target.y - leg.start.y) / len};
}

namespace {

Point random_point(Rng& rng, const Area& area) {
  const double x = uniform01(rng) * area.width;
  const double y = uniform01(rng) * area.height;
  return {x, y};
}

}  // namespace

MobilityTrace generate_trace(std::uint64_t seed, const MobilityParams& params) {
  if (!(params.area.width > 0.0) || !(params.area.height > 0.0)) {
    throw MobilityError("area dimensions must be positive");
  }
  if (params.num_nodes < 1) throw MobilityError("num_nodes must be >= 1");
  if (!(params.vmax >= 0.0)) throw MobilityError("vmax must be >= 0");
  if (!(params.horizon > 0.0)) throw MobilityError("horizon must be > 0");

  Rng rng(seed);
  std::vector<std::vector<Leg>> legs(params.num_nodes);
  for (auto& node_legs : legs) {
    Point here = random_point(rng, params.area);
    if (params.vmax == 0.0) {
      node_legs.push_back({here, here, 0.0, 0.0});
      continue;
    }
    double t = 0.0;
    while (t < params.horizon) {
      const Point target = random_point(rng, params.area);
      const double speed = params.vmax * uniform01_open_low(rng);
      Leg leg{here, target, speed, t};
      const double dur = leg.duration();
      if (!(dur > 0.0)) continue;  // target coincides with current position
      node_legs.push_back(leg);
      t += dur;
      here = target;
    }
  }
  return MobilityTrace(std::move(legs), params.horizon, params.vmax, seed);
}

void write_trace(std::ostream& out, const MobilityTrace& trace) {
  const auto old_precision = out.precision(17);
  out << trace.num_nodes() << ' ' << trace.horizon() << ' ' << trace.vmax() << ' '
      << trace.seed() << '\n';
  for (NodeId n = 0; n < trace.num_nodes(); ++n) {
    for (const Leg& leg : trace.legs(n)) {
      out << n << ' ' << leg.start_time << ' ' << leg.start.x << ' ' << leg.start.y << ' '
          << leg.target.x << ' ' << leg.target.y << ' ' << leg.speed << '\n';
    }
  }
  out.precision(old_precision);
}

MobilityTrace read_trace(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw MobilityError("trace file: missing header");
  std::istringstream header(line);
  std::size_t num_nodes = 0;
  double horizon = 0.0;
  double vmax = 0.0;
  std::uint64_t seed = 0;
  if (!(header >> num_nodes >> horizon >> vmax >> seed) || num_nodes == 0) {
    throw MobilityError("trace file: malformed header");
  }
  std::vector<std::vector<Leg>> legs(num_nodes);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::size_t node = 0;
    Leg leg;
    if (!(fields >> node >> leg.start_time >> leg.start.x >> leg.start.y >> leg.target.x >>
          leg.target.y >> leg.speed)) {
      throw MobilityError("trace file: malformed leg on line " + std::to_string(line_no));
    }
    if (node >= num_nodes) {
      throw MobilityError("trace file: node id out of range on line " + std::to_string(line_no));
    }
    if (!legs[node].empty() && leg.start_time < legs[node].back().start_time) {
      throw MobilityError("trace file: legs out of order on line " + std::to_string(line_no));
    }
    legs[node].push_back(leg);
  }
  return MobilityTrace(std::move(legs), horizon, vmax, seed);
}

}  // namespace sda
