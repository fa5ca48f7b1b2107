#include <gtest/gtest.h>

#include <deque>
#include <vector>

#include "sda/sensing.hpp"

namespace sda {
namespace {

TEST(Sensing, NormalDataInBand) {
  Rng rng(1);
  const DataGenParams p;
  for (int i = 0; i < 100000; ++i) {
    const double v = generate_datum(false, p, rng);
    ASSERT_GE(v, 60.0);
    ASSERT_LE(v, 100.0);
  }
}

TEST(Sensing, CompromisedDataInBand) {
  Rng rng(2);
  const DataGenParams p;
  double lo = 1e9, hi = -1e9;
  for (int i = 0; i < 100000; ++i) {
    const double v = generate_datum(true, p, rng);
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 400.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_LT(lo, 5.0);
  EXPECT_GT(hi, 395.0);
}

TEST(Sensing, NormalMeanMonteCarlo) {
  Rng rng(3);
  const DataGenParams p;
  double sum = 0;
  constexpr int kDraws = 1'000'000;
  for (int i = 0; i < kDraws; ++i) sum += generate_datum(false, p, rng);
  EXPECT_NEAR(sum / kDraws, 80.0, 0.2);
}

TEST(Sensing, NoFlipsBeforeStartRound) {
  CFState s(100, 20, 1.0);
  Rng rng(4);
  for (Round r = 0; r < 10; ++r) cf_enable(r, s, rng);
  EXPECT_EQ(s.count(), 0U);
  cf_enable(10, s, rng);
  EXPECT_EQ(s.count(), 20U);
}

TEST(Sensing, ZeroProbabilityNeverFlips) {
  CFState s(100, 20, 0.0);
  Rng rng(5);
  for (Round r = 0; r < 4000; ++r) cf_enable(r, s, rng);
  EXPECT_EQ(s.count(), 0U);
}

TEST(Sensing, CapKeepsLowestIds) {
  CFState s(50, 7, 1.0);
  Rng rng(6);
  cf_enable(12, s, rng);
  ASSERT_EQ(s.count(), 7U);
  for (NodeId n = 0; n < 50; ++n) {
    EXPECT_EQ(s.is_cf(n), n < 7);
    if (n < 7) EXPECT_EQ(s.cf_onset_round[n], Round{12});
    else EXPECT_FALSE(s.cf_onset_round[n]);
  }
}

TEST(Sensing, EmpiricalFlipRate) {
  Rng rng(7);
  std::size_t flips = 0;
  constexpr int kRounds = 10000;
  for (int r = 0; r < kRounds; ++r) {
    CFState s(100, 100, 0.005);
    cf_enable(10, s, rng);
    flips += s.count();
  }
  EXPECT_NEAR(static_cast<double>(flips) / kRounds, 0.5, 0.05);
}

TEST(Sensing, CFSetMonotoneAndCapped) {
  Rng rng(8);
  CFState s(100, 20, 0.005);
  std::vector<bool> before = s.cf_flags;
  for (Round r = 0; r < 4000; ++r) {
    cf_enable(r, s, rng);
    for (NodeId n = 0; n < 100; ++n) ASSERT_TRUE(!before[n] || s.cf_flags[n]);
    ASSERT_LE(s.count(), 20U);
    before = s.cf_flags;
  }
  EXPECT_EQ(s.count(), 20U);
}

TEST(Sensing, WindowEvictsOldest) {
  BeaconWindow w(3);
  for (double v : {1.0, 2.0, 3.0, 4.0}) w.record(v);
  EXPECT_EQ(std::vector<double>(w.values().begin(), w.values().end()), (std::vector<double>{2, 3, 4}));
  BeaconWindow u(3);
  u.record(1);
  u.record(4);
  EXPECT_EQ(std::vector<double>(u.values().begin(), u.values().end()), (std::vector<double>{1, 4}));
}

TEST(Sensing, WindowEqualsInsertSuffix) {
  Rng rng(9);
  BeaconWindow w(10);
  std::vector<double> all;
  for (int i = 0; i < 1000; ++i) {
    const double v = static_cast<double>(rng() % 1000);
    all.push_back(v);
    w.record(v);
    const std::size_t k = std::min<std::size_t>(10, all.size());
    ASSERT_EQ(std::vector<double>(w.values().begin(), w.values().end()),
              std::vector<double>(all.end() - static_cast<std::ptrdiff_t>(k), all.end()));
  }
}

TEST(Sensing, WindowRejectsZeroCapacity) { EXPECT_THROW(BeaconWindow(0), std::invalid_argument); }

}  // namespace
}  // namespace sda
