#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <utility>

#include "sda/sensing.hpp"
#include "sda/types.hpp"

namespace sda {

/// (sample count, two-sided 95% t-score) reference rows used by the outlier
/// test. Counts at or above the last row use its value.
inline constexpr std::array<std::pair<int, double>, 18> kTScoreTable{{
    {1, 12.706}, {2, 4.303},  {3, 3.182},  {4, 2.776},   {5, 2.571},    {6, 2.447},
    {7, 2.365},  {8, 2.306},  {9, 2.262},  {10, 2.228},  {15, 2.131},   {20, 2.086},
    {25, 2.060}, {30, 2.042}, {40, 2.021}, {60, 2.000},  {120, 1.980},  {5000, 1.960},
}};

/// Table lookup with linear interpolation between bracketing rows.
/// Throws std::invalid_argument for n < 1.
double t_score(int n);

/// Grubbs critical value ((n-1)/sqrt(n)) * sqrt(t^2 / (n - 2 + t^2)) with
/// t = t_score(n). Throws std::invalid_argument for n < 3.
double grubbs_threshold(int n);

/// Two-sided Grubbs test on the most recently appended value: 0 if `inserted`
/// is the window minimum or maximum and deviates from the mean by more than
/// grubbs_threshold(|window|) sample standard deviations, 1 otherwise.
/// Windows shorter than 3 or with SD < 1e-9 always score 1.
/// Throws std::invalid_argument on an empty window.
int raw_trust_score(std::span<const double> window, double inserted);
inline int raw_trust_score(const BeaconWindow& window, double inserted) {
  return raw_trust_score(window.values(), inserted);
}

enum class Association : std::uint8_t { kPrevious, kCurrent };

struct TrustScore {
  std::uint8_t score = 1;  // 0 or 1
  Association tag = Association::kCurrent;

  friend bool operator==(const TrustScore&, const TrustScore&) = default;
};

class TrustScoreBuffer {
 public:
  explicit TrustScoreBuffer(std::size_t capacity = 10);

  /// FIFO append tagged as the current association.
  void append(int score);
  /// Moves every current-association score into the previous segment.
  void roll_association();

  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] std::size_t capacity() const { return capacity_; }
  [[nodiscard]] const std::deque<TrustScore>& entries() const { return entries_; }

 private:
  std::size_t capacity_;
  std::deque<TrustScore> entries_;  // oldest first
};

/// history_weight * avg(previous) + (1 - history_weight) * avg(current).
/// std::nullopt until the buffer holds ceil(capacity / 2) scores. When one
/// segment is empty the other's plain average is returned.
std::optional<double> est_avg_trust(const TrustScoreBuffer& buffer, double history_weight);

struct TrustAssessment {
  std::optional<double> est_avg_trust;
  bool is_cf_locally = false;
  std::optional<Round> detection_round;
};

/// Latches the CF flag when est < threshold. Once set the flag never clears.
TrustAssessment check_cf_status(TrustAssessment assessment, double est, double threshold,
                                Round round);

/// Everything one observer keeps about one neighbor.
struct NeighborTrustState {
  BeaconWindow window;
  TrustScoreBuffer scores;
  TrustAssessment assessment;

  NeighborTrustState(std::size_t bw_capacity, std::size_t tsb_capacity)
      : window(bw_capacity), scores(tsb_capacity) {}
};

}  // namespace sda
