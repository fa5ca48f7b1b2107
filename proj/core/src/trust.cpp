#include "sda/trust.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sda {

double t_score(int n) {
  if (n < 1) throw std::invalid_argument("t_score: sample count must be >= 1");
  if (n >= kTScoreTable.back().first) return kTScoreTable.back().second;
  auto upper = std::lower_bound(kTScoreTable.begin(), kTScoreTable.end(), n,
                                [](const auto& row, int count) { return row.first < count; });
  if (upper->first == n) return upper->second;
  const auto lower = std::prev(upper);
  const double frac =
      static_cast<double>(n - lower->first) / static_cast<double>(upper->first - lower->first);
  return lower->second + frac * (upper->second - lower->second);
}

double grubbs_threshold(int n) {
  if (n < 3) throw std::invalid_argument("grubbs_threshold: window size must be >= 3");
  const double t = t_score(n);
  const double nd = static_cast<double>(n);
  return (nd - 1.0) / std::sqrt(nd) * std::sqrt(t * t / (nd - 2.0 + t * t));
}

int raw_trust_score(std::span<const double> window, double inserted) {
  if (window.empty()) throw std::invalid_argument("raw_trust_score: empty beacon window");
  const std::size_t n = window.size();
  if (n < 3) return 1;

  double sum = 0.0;
  double lo = window.front();
  double hi = window.front();
  for (double v : window) {
    sum += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double mean = sum / static_cast<double>(n);
  double sq = 0.0;
  for (double v : window) sq += (v - mean) * (v - mean);
  const double sd = std::sqrt(sq / static_cast<double>(n - 1));
  if (sd < 1e-9) return 1;

  const double g = grubbs_threshold(static_cast<int>(n));
  if (inserted == lo && std::abs(mean - lo) / sd > g) return 0;
  if (inserted == hi && std::abs(mean - hi) / sd > g) return 0;
  return 1;
}

TrustScoreBuffer::TrustScoreBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("trust score buffer capacity must be >= 1");
}

void TrustScoreBuffer::append(int score) {
  if (score != 0 && score != 1) throw std::invalid_argument("trust scores are 0 or 1");
  if (entries_.size() == capacity_) entries_.pop_front();
  entries_.push_back({static_cast<std::uint8_t>(score), Association::kCurrent});
}

void TrustScoreBuffer::roll_association() {
  for (auto& e : entries_) e.tag = Association::kPrevious;
}

std::optional<double> est_avg_trust(const TrustScoreBuffer& buffer, double history_weight) {
  const std::size_t gate = (buffer.capacity() + 1) / 2;
  if (buffer.size() < gate || buffer.size() == 0) return std::nullopt;

  std::size_t prev_n = 0;
  std::size_t prev_sum = 0;
  std::size_t cur_n = 0;
  std::size_t cur_sum = 0;
  for (const auto& e : buffer.entries()) {
    if (e.tag == Association::kPrevious) {
      ++prev_n;
      prev_sum += e.score;
    } else {
      ++cur_n;
      cur_sum += e.score;
    }
  }
  const double prev_avg = prev_n ? static_cast<double>(prev_sum) / static_cast<double>(prev_n) : 0;
  const double cur_avg = cur_n ? static_cast<double>(cur_sum) / static_cast<double>(cur_n) : 0;
  if (prev_n == 0) return cur_avg;
  if (cur_n == 0) return prev_avg;
  return history_weight * prev_avg + (1.0 - history_weight) * cur_avg;
}

TrustAssessment check_cf_status(TrustAssessment assessment, double est, double threshold,
                                Round round) {
  assessment.est_avg_trust = est;
  if (!assessment.is_cf_locally && est < threshold) {
    assessment.is_cf_locally = true;
    assessment.detection_round = round;
  }
  return assessment;
}

}  // namespace sda
