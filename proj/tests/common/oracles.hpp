#pragma once

// Independent reference computations. Nothing here calls into sda:: code
// paths under test; the t-score table is a separate copy on purpose.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "sda/mobility.hpp"
#include "sda/topology.hpp"

namespace sda::oracle {

inline long double t_score(int n) {
  static const int counts[] = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20, 25, 30, 40, 60, 120, 5000};
  static const long double scores[] = {12.706L, 4.303L, 3.182L, 2.776L, 2.571L, 2.447L,
                                       2.365L,  2.306L, 2.262L, 2.228L, 2.131L, 2.086L,
                                       2.060L,  2.042L, 2.021L, 2.000L, 1.980L, 1.960L};
  constexpr int rows = 18;
  if (n >= counts[rows - 1]) return scores[rows - 1];
  for (int i = 0; i + 1 < rows; ++i) {
    if (n == counts[i]) return scores[i];
    if (n > counts[i] && n < counts[i + 1]) {
      const long double w = static_cast<long double>(n - counts[i]) / (counts[i + 1] - counts[i]);
      return scores[i] + w * (scores[i + 1] - scores[i]);
    }
  }
  return scores[0];
}

inline long double grubbs(int n) {
  const long double t = t_score(n);
  const long double nn = n;
  return (nn - 1) / sqrtl(nn) * sqrtl(t * t / (nn - 2 + t * t));
}

/// Recomputes everything from a sorted copy of the window.
inline int raw_score(std::vector<double> window, double inserted) {
  const std::size_t n = window.size();
  if (n < 3) return 1;
  std::sort(window.begin(), window.end());
  long double sum = 0;
  for (double v : window) sum += v;
  const long double mean = sum / n;
  long double ss = 0;
  for (double v : window) ss += (v - mean) * (v - mean);
  const long double sd = sqrtl(ss / (n - 1));
  if (sd < 1e-9L) return 1;
  const long double g = grubbs(static_cast<int>(n));
  const double lo = window.front();
  const double hi = window.back();
  if (inserted == lo && fabsl(mean - lo) / sd > g) return 0;
  if (inserted == hi && fabsl(hi - mean) / sd > g) return 0;
  return 1;
}

/// Time until two constant-velocity nodes drift apart past `range`, by 1 ms steps.
inline double let_by_stepping(Point a, Point b, Velocity va, Velocity vb, double range,
                              double cap = 2000.0) {
  constexpr double dt = 1e-3;
  for (long step = 1; step * dt <= cap; ++step) {
    const double t = step * dt;
    const double dx = (a.x + va.vx * t) - (b.x + vb.vx * t);
    const double dy = (a.y + va.vy * t) - (b.y + vb.vy * t);
    if (std::sqrt(dx * dx + dy * dy) > range) return t;
  }
  return std::numeric_limits<double>::infinity();
}

/// Position of one node by stepping its legs in 1 ms increments. Crossing a
/// waypoint snaps to it and carries the remaining time into the next leg.
class LegStepper {
 public:
  explicit LegStepper(const std::vector<Leg>& legs) : legs_(&legs), pos_(legs.front().start) {}

  Point advance(double dt) {
    double left = dt;
    while (left > 0 && leg_ < legs_->size()) {
      const Leg& leg = (*legs_)[leg_];
      if (leg.speed == 0.0) break;
      const double dx = leg.target.x - pos_.x;
      const double dy = leg.target.y - pos_.y;
      const double remain = std::sqrt(dx * dx + dy * dy);
      const double step = leg.speed * left;
      if (step >= remain) {
        pos_ = leg.target;
        left -= remain / leg.speed;
        ++leg_;
      } else {
        pos_.x += dx / remain * step;
        pos_.y += dy / remain * step;
        left = 0;
      }
    }
    return pos_;
  }

 private:
  const std::vector<Leg>* legs_;
  std::size_t leg_ = 0;
  Point pos_;
};

struct EdgeSetBest {
  bool found = false;
  double min_length = std::numeric_limits<double>::infinity();
  double max_let = -std::numeric_limits<double>::infinity();
};

/// Enumerates every (n-1)-edge subset and keeps the spanning ones.
inline EdgeSetBest enumerate_spanning_trees(std::size_t n, const std::vector<Edge>& edges) {
  EdgeSetBest best;
  const std::size_t m = edges.size();
  for (std::uint32_t mask = 0; mask < (1U << m); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != n - 1) continue;
    std::vector<std::size_t> comp(n);
    std::iota(comp.begin(), comp.end(), 0);
    auto root = [&](std::size_t x) {
      while (comp[x] != x) x = comp[x];
      return x;
    };
    bool cycle = false;
    double length = 0, let = 0;
    for (std::size_t e = 0; e < m && !cycle; ++e) {
      if (!(mask >> e & 1U)) continue;
      const std::size_t ra = root(edges[e].a), rb = root(edges[e].b);
      if (ra == rb) cycle = true;
      comp[ra] = rb;
      length += edges[e].length;
      let += edges[e].let;
    }
    if (cycle) continue;
    best.found = true;
    best.min_length = std::min(best.min_length, length);
    best.max_let = std::max(best.max_let, let);
  }
  return best;
}

/// Hop distance from `source` over an undirected edge list, by relaxation.
inline std::vector<int> hop_distances(std::size_t n, const std::vector<Edge>& edges, NodeId source) {
  std::vector<int> dist(n, std::numeric_limits<int>::max());
  dist[source] = 0;
  for (std::size_t pass = 0; pass < n; ++pass) {
    for (const Edge& e : edges) {
      if (dist[e.a] != std::numeric_limits<int>::max()) dist[e.b] = std::min(dist[e.b], dist[e.a] + 1);
      if (dist[e.b] != std::numeric_limits<int>::max()) dist[e.a] = std::min(dist[e.a], dist[e.b] + 1);
    }
  }
  return dist;
}

}  // namespace sda::oracle
