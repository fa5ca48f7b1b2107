#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "sda/topology.hpp"

namespace sda::gen {

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

inline std::size_t index(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

/// Random labelled tree: each node attaches to an earlier one, then labels are shuffled.
inline SpanningTree random_tree(std::size_t n, Rng& rng) {
  std::vector<NodeId> label(n);
  std::iota(label.begin(), label.end(), NodeId{0});
  std::shuffle(label.begin(), label.end(), rng);
  SpanningTree edges;
  for (std::size_t i = 1; i < n; ++i) {
    NodeId a = label[i];
    NodeId b = label[index(rng, i)];
    if (a > b) std::swap(a, b);
    edges.push_back({a, b, 1.0, 1.0});
  }
  return edges;
}

inline std::vector<Point> random_points(std::size_t n, Rng& rng, double side = 100.0) {
  std::vector<Point> pts(n);
  for (auto& p : pts) p = {uniform(rng, 0, side), uniform(rng, 0, side)};
  return pts;
}

inline std::vector<Velocity> random_velocities(std::size_t n, Rng& rng, double vmax) {
  std::vector<Velocity> v(n);
  for (auto& x : v) x = {uniform(rng, -vmax, vmax), uniform(rng, -vmax, vmax)};
  return v;
}

}  // namespace sda::gen
