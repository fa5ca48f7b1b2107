#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "../common/generators.hpp"
#include "../common/oracles.hpp"
#include "sda/trust.hpp"

namespace sda {
namespace {

TEST(Trust, TScoreTableAndInterpolation) {
  EXPECT_DOUBLE_EQ(t_score(10), 2.228);
  EXPECT_NEAR(t_score(12), 2.1892, 1e-12);
  EXPECT_DOUBLE_EQ(t_score(7000), 1.960);
  EXPECT_DOUBLE_EQ(t_score(5000), 1.960);
  EXPECT_DOUBLE_EQ(t_score(1), 12.706);
  EXPECT_THROW(t_score(0), std::invalid_argument);
}

TEST(Trust, GrubbsThresholdValues) {
  EXPECT_NEAR(grubbs_threshold(10), 1.7612, 1e-4);
  EXPECT_NEAR(grubbs_threshold(3), 1.1016, 1e-4);
  EXPECT_GT(grubbs_threshold(120), grubbs_threshold(30));
  EXPECT_GT(grubbs_threshold(30), grubbs_threshold(10));
  EXPECT_THROW(grubbs_threshold(2), std::invalid_argument);
}

TEST(Trust, GrubbsMatchesHighPrecision) {
  for (int n = 3; n <= 5000; ++n) {
    const long double ref = oracle::grubbs(n);
    ASSERT_LE(std::fabs(static_cast<long double>(grubbs_threshold(n)) - ref) / ref, 1e-9L) << n;
  }
}

TEST(Trust, RawScoreExamples) {
  const std::vector<double> spike{80, 80, 80, 80, 80, 80, 80, 80, 80, 300};
  EXPECT_EQ(raw_trust_score(spike, 300.0), 0);
  const std::vector<double> calm{78, 82, 80, 79, 81, 80, 80, 80, 80, 80};
  EXPECT_EQ(raw_trust_score(calm, 80.0), 1);
  const std::vector<double> flat(10, 80.0);
  EXPECT_EQ(raw_trust_score(flat, 80.0), 1);
  const std::vector<double> two{1.0, 500.0};
  EXPECT_EQ(raw_trust_score(two, 500.0), 1);
  EXPECT_THROW(raw_trust_score(std::vector<double>{}, 1.0), std::invalid_argument);
}

TEST(Trust, RawScoreSpikeRatio) {
  // mean 102, sample SD 69.57, ratio 2.846
  const std::vector<double> spike{80, 80, 80, 80, 80, 80, 80, 80, 80, 300};
  double mean = 0;
  for (double v : spike) mean += v;
  mean /= 10;
  double ss = 0;
  for (double v : spike) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / 9);
  EXPECT_NEAR(mean, 102.0, 1e-12);
  EXPECT_NEAR(sd, 69.57, 0.01);
  EXPECT_NEAR((300 - mean) / sd, 2.846, 0.001);
}

TEST(Trust, RawScoreMatchesBruteForce) {
  Rng rng(2024);
  int zeros = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 3 + gen::index(rng, 118);
    std::vector<double> w(n);
    for (auto& v : w) v = gen::uniform(rng, 60, 100);
    if (gen::index(rng, 3) == 0) w.back() = gen::uniform(rng, 0, 400);
    if (gen::index(rng, 10) == 0) w.back() = w.front();
    const int expected = oracle::raw_score(w, w.back());
    zeros += expected == 0;
    ASSERT_EQ(raw_trust_score(w, w.back()), expected) << "trial " << trial;
  }
  EXPECT_GT(zeros, 100);
}

TEST(Trust, BufferAppendAndEvict) {
  TrustScoreBuffer b(3);
  for (int s : {0, 1, 1, 0}) b.append(s);
  ASSERT_EQ(b.size(), 3U);
  EXPECT_EQ(b.entries()[0].score, 1);
  EXPECT_EQ(b.entries()[1].score, 1);
  EXPECT_EQ(b.entries()[2].score, 0);
  for (const auto& e : b.entries()) EXPECT_EQ(e.tag, Association::kCurrent);
  EXPECT_THROW(b.append(2), std::invalid_argument);
}

TEST(Trust, BufferEqualsAppendSuffix) {
  Rng rng(5);
  TrustScoreBuffer b(30);
  std::vector<int> all;
  for (int i = 0; i < 500; ++i) {
    const int s = static_cast<int>(rng() & 1U);
    all.push_back(s);
    b.append(s);
  }
  ASSERT_EQ(b.size(), 30U);
  for (std::size_t i = 0; i < 30; ++i) EXPECT_EQ(b.entries()[i].score, all[470 + i]);
}

TEST(Trust, RollRetagsEverything) {
  TrustScoreBuffer b(10);
  b.roll_association();
  EXPECT_EQ(b.size(), 0U);
  b.append(1);
  b.roll_association();
  b.append(0);
  b.roll_association();
  for (const auto& e : b.entries()) EXPECT_EQ(e.tag, Association::kPrevious);
}

TEST(Trust, EstimateWeightsSegments) {
  TrustScoreBuffer b(10);
  for (int i = 0; i < 4; ++i) b.append(1);
  b.roll_association();
  b.append(1);
  b.append(0);
  const auto est = est_avg_trust(b, 0.3);
  ASSERT_TRUE(est);
  EXPECT_NEAR(*est, 0.65, 1e-12);
  EXPECT_NEAR(*est_avg_trust(b, 1.0), 1.0, 1e-12);
  EXPECT_NEAR(*est_avg_trust(b, 0.0), 0.5, 1e-12);
}

TEST(Trust, EstimateGatedAtHalfCapacity) {
  TrustScoreBuffer b(10);
  for (int i = 0; i < 3; ++i) b.append(1);
  EXPECT_FALSE(est_avg_trust(b, 0.5));
  b.append(1);
  EXPECT_FALSE(est_avg_trust(b, 0.5));
  b.append(1);
  EXPECT_TRUE(est_avg_trust(b, 0.5));
  TrustScoreBuffer odd(7);
  for (int i = 0; i < 3; ++i) odd.append(0);
  EXPECT_FALSE(est_avg_trust(odd, 0.5));
  odd.append(0);
  EXPECT_TRUE(est_avg_trust(odd, 0.5));
}

TEST(Trust, EstimateSingleSegmentFallsBack) {
  TrustScoreBuffer b(4);
  b.append(1);
  b.append(0);
  EXPECT_NEAR(*est_avg_trust(b, 0.9), 0.5, 1e-12);
  b.roll_association();
  EXPECT_NEAR(*est_avg_trust(b, 0.1), 0.5, 1e-12);
}

TEST(Trust, EstimateAlwaysInUnitInterval) {
  Rng rng(77);
  for (int trial = 0; trial < 2000; ++trial) {
    TrustScoreBuffer b(1 + gen::index(rng, 50));
    const double hw = gen::uniform(rng, 0, 1);
    for (int i = 0; i < 80; ++i) {
      if (gen::index(rng, 8) == 0) b.roll_association();
      b.append(static_cast<int>(rng() & 1U));
      if (const auto est = est_avg_trust(b, hw)) {
        ASSERT_GE(*est, 0.0);
        ASSERT_LE(*est, 1.0);
      }
    }
  }
}

TEST(Trust, CheckStatusStrictAndLatched) {
  TrustAssessment a;
  a = check_cf_status(a, 0.5, 0.5, 3);
  EXPECT_FALSE(a.is_cf_locally);
  a = check_cf_status(a, 0.4, 0.5, 4);
  EXPECT_TRUE(a.is_cf_locally);
  EXPECT_EQ(a.detection_round, Round{4});
  a = check_cf_status(a, 1.0, 0.5, 5);
  EXPECT_TRUE(a.is_cf_locally);
  EXPECT_EQ(a.detection_round, Round{4});
}

TEST(Trust, LatchHoldsForAnySequence) {
  Rng rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    TrustAssessment a;
    bool seen = false;
    for (Round r = 0; r < 100; ++r) {
      a = check_cf_status(a, gen::uniform(rng, 0, 1), 0.3, r);
      if (seen) ASSERT_TRUE(a.is_cf_locally);
      seen = seen || a.is_cf_locally;
    }
  }
}

}  // namespace
}  // namespace sda
