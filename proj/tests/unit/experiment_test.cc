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

#include "dprelu/experiment.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dprelu/preprocess.h"
#include "gtest/gtest.h"

namespace dprelu {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("dprelu_test_" + std::to_string(::testing::UnitTest::GetInstance()
                                                 ->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const fs::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

ExperimentConfig SmallConfig() {
  ExperimentConfig cfg;
  cfg.synthetic.dim = 3;
  cfg.synthetic.n = 600;
  cfg.algorithms = {Algorithm::kDpMbGlmtron};
  cfg.epsilons = {0.5};
  cfg.seeds = {0, 1, 2, 3, 4};
  cfg.trainer.eta = 0.1;
  cfg.trainer.batch = 20;
  cfg.trainer.estimating = 2;
  cfg.mc_samples = 2000;
  cfg.public_size = 10;
  return cfg;
}

TEST(LoadCsvTest, HandWritten) {
  TempDir dir;
  WriteText(dir.path() / "a.csv", "f1,target,f2\n1,10,2\n3,20,4\n5,30,6\n");
  const Dataset d = LoadCsv((dir.path() / "a.csv").string(), "target");
  EXPECT_EQ(d.size(), 3u);
  EXPECT_EQ(d.dim(), 2u);
  EXPECT_EQ(d.x(2)[0], 5.0);
  EXPECT_EQ(d.x(2)[1], 6.0);
  EXPECT_EQ(d.y(1), 20.0);
  const Dataset by_index = LoadCsv((dir.path() / "a.csv").string(), "1");
  EXPECT_EQ(by_index, d);
}

TEST(LoadCsvTest, Errors) {
  TempDir dir;
  EXPECT_THROW(LoadCsv((dir.path() / "missing.csv").string(), "y"),
               std::runtime_error);
  WriteText(dir.path() / "b.csv", "a,y\n1,2\n3,oops\n");
  try {
    LoadCsv((dir.path() / "b.csv").string(), "y");
    FAIL() << "expected a parse error";
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("y"), std::string::npos) << msg;
  }
  WriteText(dir.path() / "c.csv", "a,y\n1,2\n");
  EXPECT_THROW(LoadCsv((dir.path() / "c.csv").string(), "z"),
               std::runtime_error);
  WriteText(dir.path() / "d.csv", "a,y\n1,2,3\n");
  EXPECT_THROW(LoadCsv((dir.path() / "d.csv").string(), "y"),
               std::runtime_error);
}

TEST(SplitTest, SizesAndPartition) {
  Dataset d(1);
  for (int i = 0; i < 10; ++i) d.Add(std::vector<double>{double(i)}, i);
  const TrainTestSplit s = Split(d, 0.2, 3);
  EXPECT_EQ(s.train.size(), 8u);
  EXPECT_EQ(s.test.size(), 2u);
  std::vector<double> all;
  for (double y : s.train.labels()) all.push_back(y);
  for (double y : s.test.labels()) all.push_back(y);
  std::sort(all.begin(), all.end());
  for (int i = 0; i < 10; ++i) EXPECT_EQ(all[i], i);
  const TrainTestSplit again = Split(d, 0.2, 3);
  EXPECT_EQ(again.train, s.train);
  EXPECT_EQ(again.test, s.test);
  EXPECT_THROW(Split(d, 0.0, 3), std::invalid_argument);
  EXPECT_THROW(Split(d, 0.05, 3), std::invalid_argument);
}

TEST(StandardizeTest, TrainStatisticsOnly) {
  Dataset train(2), test(2);
  train.Add(std::vector<double>{1, 4}, 0);
  train.Add(std::vector<double>{3, 4}, 0);
  test.Add(std::vector<double>{5, 4}, 0);
  const ColumnStats stats = Standardize(train, test);
  EXPECT_EQ(train.x(0)[0], -1.0);
  EXPECT_EQ(train.x(1)[0], 1.0);
  EXPECT_EQ(test.x(0)[0], 3.0);
  EXPECT_EQ(train.x(0)[1], 0.0);
  EXPECT_EQ(train.x(1)[1], 0.0);
  EXPECT_EQ(stats.mean, (std::vector<double>{2, 4}));
  EXPECT_EQ(stats.std, (std::vector<double>{1, 1}));
}

TEST(NormalizeTargetTest, Examples) {
  Dataset train(1), test(1);
  train.Add(std::vector<double>{0}, -2);
  train.Add(std::vector<double>{0}, 1);
  test.Add(std::vector<double>{0}, 4);
  EXPECT_EQ(NormalizeTarget(train, test), 4.0);
  EXPECT_EQ(train.y(0), -0.5);
  EXPECT_EQ(train.y(1), 0.25);
  EXPECT_EQ(test.y(0), 1.0);

  Dataset unit(1), empty_test(1);
  unit.Add(std::vector<double>{0}, -1);
  unit.Add(std::vector<double>{0}, 0.5);
  empty_test.Add(std::vector<double>{0}, 0.25);
  EXPECT_EQ(NormalizeTarget(unit, empty_test), 1.0);
  EXPECT_EQ(unit.y(1), 0.5);

  Dataset zeros(1), zeros_test(1);
  zeros.Add(std::vector<double>{1}, 0);
  zeros_test.Add(std::vector<double>{1}, 0);
  EXPECT_THROW(NormalizeTarget(zeros, zeros_test), std::invalid_argument);
}

TEST(FitLogLogSlopeTest, Examples) {
  std::vector<std::pair<double, double>> square, constant, inverse;
  for (double x : {1.0, 2.0, 4.0, 8.0}) {
    square.emplace_back(x, x * x);
    constant.emplace_back(x, 3.0);
    inverse.emplace_back(x, 7.0 / (x * x));
  }
  EXPECT_NEAR(FitLogLogSlope(square), 2.0, 1e-12);
  EXPECT_NEAR(FitLogLogSlope(constant), 0.0, 1e-12);
  EXPECT_NEAR(FitLogLogSlope(inverse), -2.0, 1e-12);
  EXPECT_THROW(FitLogLogSlope(std::vector<std::pair<double, double>>{
                   {1, 1}, {2, -1}, {3, 1}}),
               std::invalid_argument);
  EXPECT_THROW(FitLogLogSlope(std::vector<std::pair<double, double>>{
                   {1, 1}, {2, 1}}),
               std::invalid_argument);
}

TEST(SummarizeTest, MeanAndSampleStd) {
  const std::vector<double> v = {1, 2, 3, 4};
  const SummaryStat s = Summarize(v);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.std, std::sqrt(5.0 / 3.0));
  EXPECT_EQ(Summarize(std::vector<double>{7}).std, 0.0);
}

TEST(RunExperimentTest, GridShapeAndAggregates) {
  const RunResult r = RunExperiment(SmallConfig());
  ASSERT_EQ(r.rows.size(), 5u);
  ASSERT_EQ(r.aggregates.size(), 1u);
  std::vector<double> train;
  for (const CellResult& row : r.rows) {
    EXPECT_TRUE(row.error.empty()) << row.error;
    ASSERT_TRUE(row.excess_risk.has_value());
    EXPECT_TRUE(std::isfinite(*row.excess_risk));
    EXPECT_FALSE(row.curve.empty());
    EXPECT_LE(row.privacy.effective_epsilon, 0.5 * (1 + 1e-12));
    train.push_back(row.final_train);
  }
  EXPECT_EQ(r.aggregates[0].n_seeds, 5u);
  EXPECT_EQ(r.aggregates[0].final_train.mean, Summarize(train).mean);
  EXPECT_EQ(r.aggregates[0].final_train.std, Summarize(train).std);
}

TEST(RunExperimentTest, OrderAndWorkerIndependent) {
  ExperimentConfig cfg = SmallConfig();
  cfg.algorithms = {Algorithm::kDpMbGlmtron, Algorithm::kDpSgd,
                    Algorithm::kDpGlmtron, Algorithm::kGlmtron};
  cfg.epsilons = {0.2, 0.5};
  cfg.seeds = {0, 1};
  const RunResult serial = RunExperiment(cfg);
  cfg.workers = 4;
  const RunResult parallel = RunExperiment(cfg);
  ASSERT_EQ(serial.rows.size(), parallel.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    EXPECT_EQ(serial.rows[i].final_train, parallel.rows[i].final_train);
    EXPECT_EQ(serial.rows[i].excess_risk, parallel.rows[i].excess_risk);
  }
  cfg.seeds = {1};
  const CellResult single = RunCell(cfg, Algorithm::kDpSgd, 0.5, 1);
  bool found = false;
  for (const CellResult& row : serial.rows) {
    if (row.algorithm == Algorithm::kDpSgd && row.epsilon == 0.5 &&
        row.seed == 1) {
      EXPECT_EQ(row.final_train, single.final_train);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(RunExperimentTest, FailingCellIsIsolated) {
  ExperimentConfig cfg = SmallConfig();
  cfg.trainer.batch = 1000;  // larger than N for the mini-batch trainers
  cfg.algorithms = {Algorithm::kGlmtron, Algorithm::kDpMbGlmtron};
  cfg.seeds = {0};
  const RunResult r = RunExperiment(cfg);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_TRUE(r.rows[0].error.empty());
  EXPECT_FALSE(r.rows[1].error.empty());
  EXPECT_TRUE(std::isnan(r.rows[1].final_train));
  EXPECT_EQ(r.aggregates[1].n_seeds, 0u);
}

TEST(RunExperimentTest, CsvSourceHasNoExcessRisk) {
  TempDir dir;
  std::string body = "a,b,y\n";
  for (int i = 0; i < 200; ++i) {
    body += std::to_string(i % 7) + "," + std::to_string(i % 5) + "," +
            std::to_string(0.5 * (i % 7) + 0.1 * (i % 3)) + "\n";
  }
  WriteText(dir.path() / "data.csv", body);
  ExperimentConfig cfg = SmallConfig();
  cfg.source = SourceKind::kCsv;
  cfg.csv = {(dir.path() / "data.csv").string(), "y"};
  cfg.algorithms = {Algorithm::kDpMbGlmtron, Algorithm::kDpGlmtron};
  cfg.seeds = {0, 1};
  const RunResult r = RunExperiment(cfg);
  for (const CellResult& row : r.rows) {
    EXPECT_TRUE(row.error.empty()) << row.error;
    EXPECT_FALSE(row.excess_risk.has_value());
  }
  EXPECT_FALSE(r.aggregates[0].excess_risk.has_value());
  EXPECT_EQ(r.target_scale, 3.2);
}

TEST(ConfigTest, ValidationErrors) {
  ExperimentConfig cfg;
  EXPECT_NO_THROW(cfg.Validate());
  cfg.test_fraction = 1.0;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
  cfg = ExperimentConfig{};
  cfg.source = SourceKind::kCsv;
  cfg.csv.path = "x.csv";
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);  // no target named
  cfg = ExperimentConfig{};
  cfg.epsilons = {0.0};
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
}

TEST(ConfigTest, JsonRoundTripAndMerge) {
  ExperimentConfig cfg = SmallConfig();
  cfg.fixed_delta = 1e-7;
  cfg.eta_dp_sgd = 0.03;
  cfg.synthetic.cov_diagonal = {1.0, 2.0, 0.5};
  cfg.threshold_mode = ThresholdMode::kExplicit;
  const nlohmann::json j = ConfigToJson(cfg);
  EXPECT_EQ(ConfigToJson(ConfigFromJson(j)), j);

  ExperimentConfig merged = cfg;
  MergeConfigJson(nlohmann::json{{"epochs", 7}, {"delta", nullptr}}, merged);
  EXPECT_EQ(merged.trainer.epochs, 7);
  EXPECT_FALSE(merged.fixed_delta.has_value());
  EXPECT_EQ(merged.trainer.batch, cfg.trainer.batch);
  EXPECT_THROW(MergeConfigJson(nlohmann::json{{"epochs", "many"}}, merged),
               std::invalid_argument);
  EXPECT_THROW(MergeConfigJson(nlohmann::json{{"algorithms", {"adam"}}}, merged),
               std::invalid_argument);
}

TEST(ConfigTest, InfiniteEpsilonRoundTrips) {
  ExperimentConfig cfg = SmallConfig();
  cfg.epsilons = {0.5, std::numeric_limits<double>::infinity()};
  const nlohmann::json j = ConfigToJson(cfg);
  EXPECT_EQ(j.at("epsilons").at(1), "inf");
  EXPECT_TRUE(std::isinf(ConfigFromJson(j).epsilons.at(1)));
}

TEST(RunExperimentTest, InfiniteEpsilonTurnsNoiseOff) {
  ExperimentConfig cfg = SmallConfig();
  cfg.algorithms = {Algorithm::kDpMbGlmtron};
  cfg.epsilons = {std::numeric_limits<double>::infinity()};
  cfg.seeds = {4};
  cfg.threshold_mode = ThresholdMode::kExplicit;
  cfg.trainer.threshold = {1024.0, 512.0, 0.0, false};
  const CellResult cell =
      RunCell(cfg, Algorithm::kDpMbGlmtron, cfg.epsilons[0], 4);
  ASSERT_TRUE(cell.error.empty()) << cell.error;
  EXPECT_EQ(cell.privacy.noise_multiplier, 0.0);
  EXPECT_TRUE(std::isinf(cell.privacy.effective_epsilon));
  EXPECT_TRUE(std::isfinite(cell.final_train));
}

TEST(WriteResultsTest, FilesAndDeterminism) {
  TempDir a, b;
  const ExperimentConfig cfg = SmallConfig();
  WriteResults(RunExperiment(cfg), a.path());
  WriteResults(RunExperiment(cfg), b.path());
  std::size_t curves = 0;
  for (const auto& entry : fs::directory_iterator(a.path() / "curves")) {
    ++curves;
    EXPECT_EQ(Slurp(entry.path()),
              Slurp(b.path() / "curves" / entry.path().filename()));
    EXPECT_EQ(Slurp(entry.path()).rfind("step,train_loss,test_loss\n", 0), 0u);
  }
  EXPECT_EQ(curves, 5u);
  const std::string summary = Slurp(a.path() / "summary.csv");
  EXPECT_EQ(summary, Slurp(b.path() / "summary.csv"));
  EXPECT_EQ(summary.rfind("algorithm,epsilon,seed,final_train,final_test,"
                          "excess_risk,effective_epsilon\n",
                          0),
            0u);
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 6);

  const ExperimentConfig back = ReadManifest(a.path() / "manifest.json");
  EXPECT_EQ(ConfigToJson(back), ConfigToJson(cfg));
  const auto manifest = nlohmann::json::parse(Slurp(a.path() / "manifest.json"));
  EXPECT_EQ(manifest.at("version"), kVersion);
}

TEST(FormatDoubleTest, SeventeenDigits) {
  EXPECT_EQ(FormatDouble(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(FormatDouble(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
}  // namespace dprelu
