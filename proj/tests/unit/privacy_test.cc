//
// Copyright 2026 The dprelu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dprelu/privacy.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dprelu/numeric.h"
#include "dprelu/rng.h"
#include "gtest/gtest.h"

namespace dprelu {
namespace {

TEST(CalibrateZcdpTest, SmallEpsilonBranch) {
  EXPECT_NEAR(CalibrateZcdpMultiplier(1.0, 1e-5), 9.5971, 1e-4);
  EXPECT_DOUBLE_EQ(CalibrateZcdpMultiplier(1.0, 1e-5),
                   std::sqrt(8.0 * std::log(1e5)));
}

TEST(CalibrateZcdpTest, LargeEpsilonBranch) {
  EXPECT_NEAR(CalibrateZcdpMultiplier(20.0, 1e-5), 0.5614, 1e-4);
  EXPECT_DOUBLE_EQ(CalibrateZcdpMultiplier(20.0, 1e-5),
                   2.0 * std::sqrt(std::log(1e5) + 20.0) / 20.0);
}

TEST(CalibrateZcdpTest, DecreasingInEpsilonWithinBranch) {
  for (double eps : {0.01, 0.1, 0.5, 1.0, 2.5}) {
    EXPECT_LT(CalibrateZcdpMultiplier(2 * eps, 1e-5),
              CalibrateZcdpMultiplier(eps, 1e-5));
  }
  EXPECT_LT(CalibrateZcdpMultiplier(40.0, 1e-5),
            CalibrateZcdpMultiplier(20.0, 1e-5));
}

TEST(CalibrateZcdpTest, RejectsBadInputs) {
  EXPECT_THROW(CalibrateZcdpMultiplier(0.0, 1e-5), std::invalid_argument);
  EXPECT_THROW(CalibrateZcdpMultiplier(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(CalibrateZcdpMultiplier(1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(CalibrateZcdpMultiplier(
                   std::numeric_limits<double>::quiet_NaN(), 1e-5),
               std::invalid_argument);
}

TEST(CalibrateZcdpTest, RoundTripNeverExceedsEpsilon) {
  for (double eps : {0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0}) {
    for (double delta : {1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8}) {
      if (eps > std::log(1.0 / delta)) continue;
      const double f = CalibrateZcdpMultiplier(eps, delta);
      EXPECT_LE(ZcdpToApproxDp(1.0 / (f * f), delta), eps * (1 + 1e-12));
    }
  }
}

TEST(ZcdpToApproxDpTest, Examples) {
  EXPECT_NEAR(ZcdpToApproxDp(0.01, 1e-5), 0.68862, 1e-5);
  EXPECT_EQ(ZcdpToApproxDp(0.0, 1e-5), 0.0);
  const double f = CalibrateZcdpMultiplier(1.0, 1e-5);
  const double eps = ZcdpToApproxDp(1.0 / (f * f), 1e-5);
  EXPECT_NEAR(eps, 0.71796, 1e-5);
  EXPECT_LE(eps, 1.0);
}

TEST(ZcdpToApproxDpTest, StrictlyIncreasing) {
  double prev = -1.0;
  for (double rho = 0.0; rho < 2.0; rho += 0.05) {
    const double e = ZcdpToApproxDp(rho, 1e-5);
    EXPECT_GT(e, prev);
    prev = e;
  }
  prev = 0.0;
  for (double delta : {1e-2, 1e-3, 1e-5, 1e-8}) {
    const double e = ZcdpToApproxDp(0.1, delta);
    EXPECT_GT(e, prev);
    prev = e;
  }
  EXPECT_THROW(ZcdpToApproxDp(-0.1, 1e-5), std::invalid_argument);
  EXPECT_THROW(ZcdpToApproxDp(0.1, 2.0), std::invalid_argument);
}

TEST(CalibrateShuffleTest, Examples) {
  const ShuffleCalibration c = CalibrateShuffleMultiplier(0.01, 1e-6, 1000000);
  EXPECT_NEAR(c.noise_multiplier, 2.7631, 1e-4);
  EXPECT_NEAR(c.epsilon_bound, 0.005256, 1e-6);
  EXPECT_FALSE(c.within_regime);
  EXPECT_TRUE(CalibrateShuffleMultiplier(0.001, 1e-6, 1000000).within_regime);
}

TEST(CalibrateShuffleTest, ScalesInverseRootN) {
  const double n = 10000;
  const double delta = 1e-6;
  const double f1 = CalibrateShuffleMultiplier(0.5, delta, 10000).noise_multiplier;
  const double f4 = CalibrateShuffleMultiplier(0.5, delta, 40000).noise_multiplier;
  EXPECT_NEAR(f4 / f1,
              0.5 * std::log(4 * n / delta) / std::log(n / delta), 1e-12);
  EXPECT_DOUBLE_EQ(
      CalibrateShuffleMultiplier(0.5, delta, 10000, 3.0).noise_multiplier,
      3.0 * f1);
}

TEST(PrivacyParamsTest, FactoriesAndValidation) {
  const PrivacyParams z = PrivacyParams::Zcdp(0.5, 1e-6);
  EXPECT_EQ(z.regime, PrivacyRegime::kZcdp);
  EXPECT_DOUBLE_EQ(z.noise_multiplier, CalibrateZcdpMultiplier(0.5, 1e-6));
  EXPECT_NO_THROW(z.Validate());

  PrivacyParams weak = z;
  weak.noise_multiplier *= 0.5;
  EXPECT_THROW(weak.Validate(), std::invalid_argument);

  const PrivacyParams s = PrivacyParams::Shuffle(0.2, 1e-5, 20000);
  EXPECT_EQ(s.regime, PrivacyRegime::kShuffleAmplified);
  EXPECT_FALSE(s.warning.empty());

  const PrivacyParams off = PrivacyParams::NoiseOff(PrivacyRegime::kZcdp);
  EXPECT_EQ(off.noise_multiplier, 0.0);
  EXPECT_NO_THROW(off.Validate());
}

TEST(ZcdpLedgerTest, SequentialAdds) {
  ZcdpLedger ledger;
  for (int i = 0; i < 5; ++i) ledger = ledger.ComposeSequential(0.1);
  EXPECT_NEAR(ledger.rho(), 0.5, 1e-15);
  EXPECT_EQ(ledger.ComposeSequential(0.0).rho(), ledger.rho());
  EXPECT_THROW(ledger.ComposeSequential(-1.0), std::invalid_argument);
}

TEST(ZcdpLedgerTest, SequentialOrderIndependent) {
  const double a = 0.013, b = 0.25, c = 1.75;
  const double abc = ZcdpLedger().ComposeSequential(a).ComposeSequential(b)
                         .ComposeSequential(c).rho();
  const double cba = ZcdpLedger().ComposeSequential(c).ComposeSequential(b)
                         .ComposeSequential(a).rho();
  EXPECT_DOUBLE_EQ(abc, cba);
  EXPECT_DOUBLE_EQ(ZcdpLedger(a).ComposeSequential(b + c).rho(),
                   ZcdpLedger(a + b).ComposeSequential(c).rho());
}

TEST(ZcdpLedgerTest, ParallelTakesMax) {
  const double f = 4.0;
  ZcdpLedger epoch;
  for (int t = 0; t < 100; ++t) {
    epoch = epoch.ComposeParallel(ZcdpLedger().ComposeSequential(1.0 / (f * f)));
  }
  EXPECT_EQ(epoch.rho(), 1.0 / 16.0);
}

TEST(ZcdpLedgerTest, MultiEpochGrowsLikeRootE) {
  const double rho = 1e-4;
  const double e1 = ZcdpLedger(rho).Epsilon(1e-6);
  const double e4 = ZcdpLedger(4 * rho).Epsilon(1e-6);
  EXPECT_NEAR(e4 / e1, 2.0, 0.02);
}

TEST(GaussianNoiseTest, ZeroStdGivesZeros) {
  Rng rng(1);
  EXPECT_EQ(GaussianNoise(0.0, 4, rng), Vector(4, 0.0));
}

TEST(GaussianNoiseTest, Deterministic) {
  Rng a(3), b(3);
  EXPECT_EQ(GaussianNoise(1.5, 10, a), GaussianNoise(1.5, 10, b));
}

TEST(GaussianNoiseTest, EmpiricalStd) {
  Rng rng(4);
  const Vector v = GaussianNoise(2.0, 1000000, rng);
  RunningStats stats;
  for (double x : v) stats.Add(x);
  EXPECT_NEAR(std::sqrt(stats.Variance()), 2.0, 0.01);
  EXPECT_NEAR(stats.Mean(), 0.0, 0.01);
}

}  // namespace
}  // namespace dprelu
