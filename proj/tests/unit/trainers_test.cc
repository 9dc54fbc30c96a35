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

#include "dprelu/trainers.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dprelu/covariance.h"
#include "dprelu/datagen.h"
#include "dprelu/numeric.h"
#include "dprelu/privacy.h"
#include "dprelu/risk.h"
#include "gtest/gtest.h"

namespace dprelu {
namespace {

GroundTruth Truth(std::size_t d, double sigma, std::uint64_t seed) {
  GroundTruth gt;
  Rng rng(seed);
  gt.w_star = SampleWStar(d, 1.0, rng);
  gt.sigma = sigma;
  gt.cov = CovarianceSpec::Identity(d);
  return gt;
}

// Thresholds this large never bind.
ThresholdParams Unbinding() { return {1e12, 1e12, 0.0, true}; }

bool SameTrace(const TrainTrace& a, const TrainTrace& b) {
  if (a.iterates != b.iterates || a.final_average != b.final_average) {
    return false;
  }
  if (a.losses.size() != b.losses.size()) return false;
  for (std::size_t i = 0; i < a.losses.size(); ++i) {
    if (a.losses[i].step != b.losses[i].step ||
        a.losses[i].train_loss != b.losses[i].train_loss) {
      return false;
    }
  }
  return true;
}

TEST(AlgorithmTest, NamesRoundTrip) {
  for (Algorithm a : {Algorithm::kGlmtron, Algorithm::kDpGlmtron,
                      Algorithm::kDpMbGlmtron, Algorithm::kDpSgd}) {
    EXPECT_EQ(ParseAlgorithm(AlgorithmName(a)), a);
  }
  EXPECT_THROW(ParseAlgorithm("adam"), std::invalid_argument);
}

TEST(RunGlmtronTest, FirstStep) {
  Dataset d(2);
  d.Add(std::vector<double>{1, 0}, 2.0);
  d.Add(std::vector<double>{0, 1}, 0.0);
  TrainerConfig cfg;
  cfg.eta = 0.5;
  cfg.shuffle = false;
  const TrainTrace trace = RunGlmtron(d, cfg);
  ASSERT_EQ(trace.iterates.size(), 3u);
  EXPECT_EQ(trace.iterates[0], (ModelVector{0, 0}));
  EXPECT_EQ(trace.iterates[1], (ModelVector{1, 0}));
  EXPECT_EQ(trace.final_average, (ModelVector{0.5, 0}));
}

TEST(RunGlmtronTest, ZeroStepSizeStaysAtOrigin) {
  const Dataset d = GenerateDataset(Truth(3, 0.1, 1), 50, 2);
  TrainerConfig cfg;
  cfg.eta = 0.0;
  const TrainTrace trace = RunGlmtron(d, cfg);
  for (const ModelVector& w : trace.iterates) EXPECT_EQ(w, ModelVector(3, 0.0));
}

TEST(RunGlmtronTest, LearnsWellSpecifiedModel) {
  const GroundTruth gt = Truth(10, 0.1, 3);
  const Dataset d = GenerateDataset(gt, 10000, 4);
  TrainerConfig cfg;
  cfg.eta = 0.05;
  cfg.seed = 5;
  const TrainTrace trace = RunGlmtron(d, cfg);
  const RiskEstimate r = ExcessRisk(trace.final_average, gt.w_star, gt, 100000, 6);
  EXPECT_LT(r.value, 5 * 0.01 * 10 / 10000.0);
}

TEST(RunGlmtronTest, IterateCountAndAverage) {
  const Dataset d = GenerateDataset(Truth(3, 0.1, 1), 40, 2);
  TrainerConfig cfg;
  cfg.eta = 0.1;
  cfg.epochs = 2;
  const TrainTrace trace = RunGlmtron(d, cfg);
  EXPECT_EQ(trace.iterates.size(), 81u);
  EXPECT_EQ(trace.num_steps, 80u);
  const ModelVector avg = AverageIterates(trace, 0);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_NEAR(avg[k], trace.final_average[k], 1e-15);
  }
  EXPECT_EQ(trace.losses.size(), 2u);
  EXPECT_EQ(trace.losses.back().step, 80u);
}

TEST(AverageIteratesTest, Examples) {
  TrainTrace constant;
  constant.iterates.assign(5, ModelVector{1.5, -2});
  EXPECT_EQ(AverageIterates(constant, 0), (ModelVector{1.5, -2}));

  TrainTrace two;
  two.iterates = {{0, 0}, {2, 0}, {7, 7}};
  EXPECT_EQ(AverageIterates(two, 0), (ModelVector{1, 0}));
  EXPECT_EQ(AverageIterates(two, 1), (ModelVector{2, 0}));
  EXPECT_THROW(AverageIterates(two, 2), std::out_of_range);
  EXPECT_THROW(AverageIterates(TrainTrace{}, 0), std::out_of_range);
}

TEST(PermuteTest, PreservesMultisetAndIsSeeded) {
  const Dataset d = GenerateDataset(Truth(2, 1.0, 1), 100, 2);
  Rng a(3), b(3), c(4);
  const Dataset p = Permute(d, a);
  EXPECT_EQ(p, Permute(d, b));
  EXPECT_NE(p, Permute(d, c));
  std::vector<double> ly(d.labels().begin(), d.labels().end());
  std::vector<double> py(p.labels().begin(), p.labels().end());
  std::sort(ly.begin(), ly.end());
  std::sort(py.begin(), py.end());
  EXPECT_EQ(ly, py);

  Dataset one(1);
  one.Add(std::vector<double>{3}, 1);
  EXPECT_EQ(Permute(one, a), one);
}

TEST(NoiseOffTest, DpGlmtronMatchesGlmtron) {
  const Dataset d = GenerateDataset(Truth(4, 0.5, 1), 300, 2);
  const Dataset pub = GenerateDataset(Truth(4, 0.5, 1), 10, 3);
  TrainerConfig cfg;
  cfg.eta = 0.05;
  cfg.seed = 17;
  cfg.threshold = Unbinding();
  const TrainTrace dp = RunDpGlmtron(
      d, pub, cfg, PrivacyParams::NoiseOff(PrivacyRegime::kShuffleAmplified));
  EXPECT_TRUE(SameTrace(dp, RunGlmtron(d, cfg)));
}

TEST(NoiseOffTest, MinibatchTrainersMatchNonPrivate) {
  const Dataset d = GenerateDataset(Truth(4, 0.5, 1), 600, 2);
  TrainerConfig cfg;
  cfg.eta = 0.2;
  cfg.batch = 20;
  cfg.estimating = 2;
  cfg.seed = 9;
  cfg.epochs = 2;
  cfg.threshold = Unbinding();
  const PrivacyParams off = PrivacyParams::NoiseOff(PrivacyRegime::kZcdp);
  EXPECT_TRUE(SameTrace(RunDpMbGlmtron(d, cfg, off), RunMinibatchGlmtron(d, cfg)));
  EXPECT_TRUE(SameTrace(RunDpSgd(d, cfg, off), RunMinibatchSgd(d, cfg)));
}

TEST(NoiseOffTest, FullBatchSingleStep) {
  const Dataset d = GenerateDataset(Truth(3, 0.5, 1), 110, 2);
  TrainerConfig cfg;
  cfg.eta = 0.3;
  cfg.estimating = 10;
  cfg.batch = 100;
  cfg.threshold = Unbinding();
  const TrainTrace t =
      RunDpMbGlmtron(d, cfg, PrivacyParams::NoiseOff(PrivacyRegime::kZcdp));
  ASSERT_EQ(t.num_steps, 1u);
  // At w = 0 the GLMtron gradient is -y x; one step gives eta * mean(y x).
  Rng rng = Rng(cfg.seed).Substream(1).Substream(0);
  const Dataset order = Permute(d, rng);
  Vector expected(3, 0.0);
  for (std::size_t i = 10; i < 110; ++i) {
    for (std::size_t k = 0; k < 3; ++k) {
      expected[k] += order.y(i) * order.x(i)[k];
    }
  }
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_NEAR(t.final_iterate[k], 0.3 * expected[k] / 100, 1e-12);
  }
}

TEST(DpSgdTest, MatchesMbGlmtronWhenIndicatorIsIrrelevant) {
  // With y = 0 both gradients reduce to x relu(<x, w>), so the gate changes
  // nothing along any trajectory, noise included.
  Dataset d(3);
  Rng rng(4);
  for (int i = 0; i < 440; ++i) {
    d.Add(std::vector<double>{rng.Normal(), rng.Normal(), rng.Normal()}, 0.0);
  }
  TrainerConfig cfg;
  cfg.eta = 0.1;
  cfg.batch = 20;
  cfg.estimating = 2;
  cfg.threshold = {64.0, 1.0 / 64, 0.0, true};
  const PrivacyParams priv = PrivacyParams::Zcdp(5.0, 1e-5);
  EXPECT_TRUE(SameTrace(RunDpMbGlmtron(d, cfg, priv), RunDpSgd(d, cfg, priv)));
}

TEST(DeterminismTest, SameSeedSameTrace) {
  const Dataset d = GenerateDataset(Truth(5, 0.5, 1), 400, 2);
  const Dataset pub = GenerateDataset(Truth(5, 0.5, 1), 20, 3);
  TrainerConfig cfg;
  cfg.eta = 0.05;
  cfg.batch = 20;
  cfg.estimating = 2;
  cfg.seed = 3;
  cfg.threshold = {64.0, 1.0 / 1024, 0.0, true};
  const PrivacyParams z = PrivacyParams::Zcdp(0.5, 1e-5);
  const PrivacyParams s = PrivacyParams::Shuffle(0.5, 1e-5, 400);
  EXPECT_TRUE(SameTrace(RunDpMbGlmtron(d, cfg, z), RunDpMbGlmtron(d, cfg, z)));
  EXPECT_TRUE(SameTrace(RunDpSgd(d, cfg, z), RunDpSgd(d, cfg, z)));
  EXPECT_TRUE(SameTrace(RunDpGlmtron(d, pub, cfg, s),
                        RunDpGlmtron(d, pub, cfg, s)));
  TrainerConfig other = cfg;
  other.seed = 4;
  EXPECT_FALSE(SameTrace(RunDpMbGlmtron(d, cfg, z), RunDpMbGlmtron(d, other, z)));
}

TEST(ClippingTest, AppliedStepBoundedByThreshold) {
  const Dataset d = GenerateDataset(Truth(5, 1.0, 1), 2000, 2);
  const Dataset pub = GenerateDataset(Truth(5, 1.0, 1), 20, 3);
  TrainerConfig cfg;
  cfg.eta = 0.05;
  cfg.batch = 40;
  cfg.estimating = 4;
  cfg.threshold = {64.0, 1.0 / 1024, 0.0, true};
  cfg.clip = {3.0, 5.0, 2.0, 0.5};
  const TrainTrace mb = RunDpMbGlmtron(d, cfg, PrivacyParams::Zcdp(0.5, 1e-5));
  ASSERT_EQ(mb.thresholds.size(), mb.applied_norms.size());
  for (std::size_t t = 0; t < mb.thresholds.size(); ++t) {
    EXPECT_LE(mb.applied_norms[t], cfg.eta * mb.thresholds[t].s * (1 + 1e-12));
  }
  const TrainTrace dp =
      RunDpGlmtron(d, pub, cfg, PrivacyParams::Shuffle(0.5, 1e-5, 2000));
  for (std::size_t t = 0; t < dp.thresholds.size(); ++t) {
    EXPECT_LE(dp.applied_norms[t], cfg.eta * dp.thresholds[t].s * (1 + 1e-12));
  }
}

TEST(ClippingTest, RarelyBindsWithTheoryConstants) {
  std::size_t steps = 0;
  std::size_t clipped_steps = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GroundTruth gt = Truth(8, 0.5, seed);
    const std::size_t n = 5000;
    const Dataset d = GenerateDataset(gt, n, 100 + seed);
    TailParams tail;
    tail.b_x = 1.0 / n;
    TrainerConfig cfg;
    cfg.eta = 0.02;
    cfg.batch = 100;
    cfg.estimating = 10;
    cfg.seed = seed;
    cfg.threshold = {SyntheticThresholdParams(gt, tail, n).upsilon, 1.0 / 64,
                     0.0, true};
    cfg.clip = {3.0, 8.0, tail.c2, tail.a};
    const TrainTrace t = RunDpMbGlmtron(d, cfg, PrivacyParams::Zcdp(50.0, 1e-5));
    for (std::size_t c : t.clipped_counts) {
      ++steps;
      if (c > 0) ++clipped_steps;
    }
  }
  EXPECT_LT(static_cast<double>(clipped_steps), 0.05 * static_cast<double>(steps));
}

TEST(AccountingTest, OneEpochCostsInverseFSquared) {
  const Dataset d = GenerateDataset(Truth(3, 0.5, 1), 1000, 2);
  TrainerConfig cfg;
  cfg.batch = 20;
  cfg.estimating = 2;
  cfg.threshold = {64.0, 1.0 / 64, 0.0, true};
  const PrivacyParams priv = PrivacyParams::Zcdp(0.5, 1e-6);
  const TrainTrace t = RunDpMbGlmtron(d, cfg, priv);
  const double f = priv.noise_multiplier;
  EXPECT_DOUBLE_EQ(t.privacy.rho_total, 1.0 / (f * f));
  EXPECT_LE(t.privacy.effective_epsilon, 0.5 * (1 + 1e-12));
  EXPECT_TRUE(t.privacy.warning.empty());

  cfg.epochs = 3;
  const TrainTrace three = RunDpMbGlmtron(d, cfg, priv);
  EXPECT_DOUBLE_EQ(three.privacy.rho_total, 3.0 / (f * f));
  EXPECT_GT(three.privacy.effective_epsilon, 0.5);
  EXPECT_FALSE(three.privacy.warning.empty());
}

TEST(PreconditionTest, Errors) {
  const Dataset d = GenerateDataset(Truth(3, 0.5, 1), 30, 2);
  const Dataset empty(3);
  TrainerConfig cfg;
  cfg.batch = 40;
  const PrivacyParams z = PrivacyParams::Zcdp(0.5, 1e-5);
  const PrivacyParams s = PrivacyParams::Shuffle(0.5, 1e-5, 30);
  EXPECT_THROW(RunDpMbGlmtron(d, cfg, z), std::invalid_argument);
  EXPECT_THROW(RunDpSgd(d, cfg, z), std::invalid_argument);
  EXPECT_THROW(RunDpGlmtron(d, empty, cfg, s), std::invalid_argument);
  EXPECT_THROW(RunDpGlmtron(d, d, cfg, z), std::invalid_argument);
  cfg.batch = 10;
  EXPECT_THROW(RunDpMbGlmtron(d, cfg, s), std::invalid_argument);
  EXPECT_THROW(RunGlmtron(empty, cfg), std::invalid_argument);
  cfg.estimating = 0;
  EXPECT_THROW(RunDpMbGlmtron(d, cfg, z), std::invalid_argument);
}

TEST(ShapeTest, MinibatchLayout) {
  TrainerConfig cfg;
  ShapeMinibatchForSteps(20000, 50, cfg);
  EXPECT_EQ(cfg.batch + cfg.estimating, 400u);
  EXPECT_EQ(cfg.estimating, (cfg.batch + 9) / 10);
  EXPECT_EQ(BlocksPerEpoch(20000, cfg), 50u);
  EXPECT_EQ(DefaultMinibatchSteps(1.0, 1000), 7u);
  EXPECT_THROW(ShapeMinibatchForSteps(10, 10, cfg), std::invalid_argument);
}

TEST(ShapeTest, DefaultStepSize) {
  const TailParams tail{2.0, 0.5, 1e-3};
  EXPECT_DOUBLE_EQ(DefaultStepSize(10.0, 1.0, 4, 0.0, tail, 1000), 0.05);
  EXPECT_LT(DefaultStepSize(10.0, 1.0, 4, 10.0, tail, 1000), 0.05);
}

TEST(LossCurveTest, CadenceAndFiniteness) {
  const Dataset d = GenerateDataset(Truth(4, 0.5, 1), 1000, 2);
  const Dataset test = GenerateDataset(Truth(4, 0.5, 1), 200, 3);
  TrainerConfig cfg;
  cfg.eta = 0.05;
  const TrainTrace t = RunGlmtron(d, cfg, &test);
  EXPECT_EQ(t.losses.size(), 100u);
  EXPECT_EQ(t.losses.front().step, 10u);
  for (const LossRecord& r : t.losses) {
    EXPECT_TRUE(std::isfinite(r.train_loss));
    EXPECT_TRUE(std::isfinite(r.test_loss));
  }
  const TrainTrace no_test = RunGlmtron(d, cfg);
  EXPECT_TRUE(std::isnan(no_test.losses.back().test_loss));
}

}  // namespace
}  // namespace dprelu
