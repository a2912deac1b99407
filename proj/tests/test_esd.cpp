#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "mediff/esd.hpp"
#include "oracles/frozen_values.hpp"
#include "oracles/reference_esd.hpp"

using namespace mediff;

namespace {

std::vector<double> rosner() { return {frozen::kRosner.begin(), frozen::kRosner.end()}; }

std::vector<double> noisy_sample(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = g(rng);
  const std::size_t spikes = rng() % 5;
  for (std::size_t s = 0; s < spikes; ++s) x[rng() % n] += (u(rng) < 0.5 ? -1.0 : 1.0) * (3.0 + 6.0 * u(rng));
  return x;
}

}  // namespace

TEST(Esd, LinearRampHasNoOutliers) {
  std::vector<double> x(20);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i + 1);
  const auto r = esd_test(x, 5, 0.05, ZScoreMode::kClassic);
  EXPECT_EQ(r.num_outliers, 0u);
  EXPECT_TRUE(r.flagged.empty());
}

TEST(Esd, RosnerExampleFlagsThree) {
  const auto x = rosner();
  const auto r = esd_test(x, 10, 0.05, ZScoreMode::kClassic);
  ASSERT_EQ(r.num_outliers, 3u);
  std::vector<double> flagged;
  for (std::size_t k : r.flagged) flagged.push_back(x[k - 1]);
  std::sort(flagged.begin(), flagged.end());
  EXPECT_EQ(flagged, (std::vector<double>{5.34, 5.42, 6.01}));
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_NEAR(r.iterations[i].zscore, frozen::kRosnerR[i], 1e-9) << "round " << i + 1;
    EXPECT_NEAR(r.iterations[i].critical, frozen::kRosnerLambda[i], 1e-9) << "round " << i + 1;
  }
}

TEST(Esd, ConstantWithOneSpikeRobust) {
  std::vector<double> x(9, 0.0);
  x.push_back(100.0);
  const auto r = esd_test(x, 2, 0.05, ZScoreMode::kRobustMad);
  EXPECT_EQ(r.flagged, (std::vector<std::size_t>{10}));
}

TEST(Esd, ConstantSampleFlagsNothing) {
  const auto r = esd_test(std::vector<double>(30, 4.2), 3, 0.05, ZScoreMode::kRobustMad);
  EXPECT_EQ(r.num_outliers, 0u);
}

TEST(Esd, ClassicMatchesBruteForce) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng() % 10;
    const std::size_t n = m + 3 + rng() % (98 - m);
    const double alpha = std::array{0.01, 0.05, 0.1}[trial % 3];
    const auto x = noisy_sample(rng, n);
    const auto got = esd_test(x, m, alpha, ZScoreMode::kClassic);
    const auto want = oracle::classic_esd(x, m, alpha);
    ASSERT_EQ(got.flagged, want.flagged) << "trial " << trial;
    for (std::size_t i = 0; i < m; ++i) {
      EXPECT_EQ(got.iterations[i].removed_index, want.rounds[i].index);
      EXPECT_NEAR(got.iterations[i].zscore, want.rounds[i].z, 1e-9);
      EXPECT_NEAR(got.iterations[i].critical, want.rounds[i].lambda, 1e-9);
    }
  }
}

TEST(Esd, CriticalValueMatchesOracle) {
  for (std::size_t n : {5u, 13u, 54u, 300u}) {
    for (std::size_t i : {1u, 2u}) {
      for (double a : {0.01, 0.05}) EXPECT_NEAR(esd_critical_value(n, i, a), oracle::critical_value(n, i, a), 1e-10);
    }
  }
}

TEST(Esd, AffineInvariantFlags) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> scale(0.1, 10.0), shift(-100.0, 100.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = noisy_sample(rng, 40 + rng() % 60);
    const double a = scale(rng), b = shift(rng);
    std::vector<double> z(x);
    for (double& v : z) v = a * v + b;
    for (auto mode : {ZScoreMode::kClassic, ZScoreMode::kRobustMad}) {
      EXPECT_EQ(esd_test(x, 8, 0.05, mode).flagged, esd_test(z, 8, 0.05, mode).flagged);
    }
  }
}

TEST(Esd, PermutationMapsFlags) {
  std::mt19937_64 rng(9);
  const auto x = noisy_sample(rng, 80);
  std::vector<std::size_t> perm(x.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < perm.size(); ++i) y[i] = x[perm[i]];
  std::vector<std::size_t> mapped;
  for (std::size_t k : esd_test(y, 6, 0.05, ZScoreMode::kRobustMad).flagged) mapped.push_back(perm[k - 1] + 1);
  std::sort(mapped.begin(), mapped.end());
  EXPECT_EQ(mapped, esd_test(x, 6, 0.05, ZScoreMode::kRobustMad).flagged);
}

TEST(Esd, MissingExcludedAndIndicesKept) {
  std::vector<double> x(20, 1.0);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += 0.01 * static_cast<double>(i % 3);
  x[2] = kMissing;
  x[14] = 50.0;
  const auto r = esd_test(x, 2, 0.05, ZScoreMode::kRobustMad);
  EXPECT_EQ(r.sample_size, 19u);
  EXPECT_EQ(r.flagged, (std::vector<std::size_t>{15}));
}

TEST(Esd, RawMadScoresAreLarger) {
  std::mt19937_64 rng(1);
  const auto x = noisy_sample(rng, 60);
  const auto normal = esd_test(x, 3, 0.05, ZScoreMode::kRobustMad, MadScale::kNormal);
  const auto raw = esd_test(x, 3, 0.05, ZScoreMode::kRobustMad, MadScale::kRaw);
  EXPECT_NEAR(raw.iterations[0].zscore, normal.iterations[0].zscore * kMadNormalConsistency, 1e-9);
  EXPECT_GE(raw.num_outliers, normal.num_outliers);
}

TEST(Esd, TooFewObservations) {
  try {
    esd_test(std::vector<double>{1, 2, 3, 4}, 2, 0.05, ZScoreMode::kClassic);
    FAIL();
  } catch (const InsufficientDataError& e) {
    EXPECT_EQ(e.required_minimum(), 5u);
  }
  EXPECT_THROW(esd_test(std::vector<double>{1, 2, 3, 4}, 0, 0.05, ZScoreMode::kClassic), UsageError);
  EXPECT_THROW(esd_test(std::vector<double>{1, 2, 3, 4, 5}, 1, 1.5, ZScoreMode::kClassic), UsageError);
}
