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

#ifndef DPRELU_EXPERIMENT_H_
#define DPRELU_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dprelu/datagen.h"
#include "dprelu/trainers.h"

namespace dprelu {

inline constexpr char kVersion[] = "0.3.0";

enum class SourceKind { kSynthetic, kCsv };

struct SyntheticSource {
  std::size_t dim = 8;
  // Training-set size. The test set holds
  // round(n * test_fraction / (1 - test_fraction)) further draws.
  std::size_t n = 20000;
  double sigma = 0.5;
  Design design = Design::kGaussian;
  double w_star_norm = 1.0;
  // Empty means H = I.
  std::vector<double> cov_diagonal;

  GroundTruth MakeGroundTruth(std::uint64_t seed) const;
};

struct CsvSource {
  std::string path;
  std::string target;
};

enum class ThresholdMode {
  kAuto,      // theory defaults for synthetic data, data-driven for csv
  kTheory,    // SyntheticThresholdParams
  kData,      // DataThresholdParams
  kExplicit,  // trainer.threshold as given
};

struct ExperimentConfig {
  SourceKind source = SourceKind::kSynthetic;
  SyntheticSource synthetic;
  CsvSource csv;

  std::vector<Algorithm> algorithms = {Algorithm::kDpSgd, Algorithm::kDpGlmtron,
                                       Algorithm::kDpMbGlmtron};
  // An infinite epsilon runs the DP trainers with noise off; JSON spells it
  // "inf".
  std::vector<double> epsilons = {0.05, 0.2, 0.5};
  // delta = fixed_delta when set, otherwise 1 / N^delta_power with N the
  // training-set size.
  std::optional<double> fixed_delta;
  double delta_power = 1.1;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};

  TrainerConfig trainer;
  // Per-algorithm step sizes; unset entries use trainer.eta.
  std::optional<double> eta_glmtron;
  std::optional<double> eta_dp_glmtron;
  std::optional<double> eta_dp_mbglmtron;
  std::optional<double> eta_dp_sgd;
  // Mini-batch trainers: when nonzero, batch and estimating are derived from
  // this many steps per epoch.
  std::size_t minibatch_steps = 0;
  // Size of the public set for DP-GLMtron. Synthetic runs draw it fresh; csv
  // runs hold it out of the training split.
  std::size_t public_size = 100;
  double shuffle_c3 = 1.0;
  ThresholdMode threshold_mode = ThresholdMode::kAuto;
  TailParams tail;  // b_x <= 0 means 1/N

  std::size_t mc_samples = 100000;
  double test_fraction = 0.2;
  std::size_t workers = 1;

  void Validate() const;
  double EtaFor(Algorithm algorithm) const;
};

nlohmann::json ConfigToJson(const ExperimentConfig& cfg);
// Missing keys keep their defaults. Throws std::invalid_argument on bad
// values.
ExperimentConfig ConfigFromJson(const nlohmann::json& j);
void MergeConfigJson(const nlohmann::json& j, ExperimentConfig& cfg);

struct CellResult {
  Algorithm algorithm = Algorithm::kGlmtron;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::vector<LossRecord> curve;
  double final_train = 0.0;
  double final_test = 0.0;
  // Synthetic sources only.
  std::optional<double> excess_risk;
  EffectivePrivacy privacy;
  double wall_seconds = 0.0;
  // Non-empty when the cell failed; the numeric fields are then NaN.
  std::string error;
};

struct SummaryStat {
  double mean = 0.0;
  double std = 0.0;  // sample std, 0 for a single seed
};

struct CellAggregate {
  Algorithm algorithm = Algorithm::kGlmtron;
  double epsilon = 0.0;
  std::size_t n_seeds = 0;
  SummaryStat final_train;
  SummaryStat final_test;
  std::optional<SummaryStat> excess_risk;
};

struct RunResult {
  ExperimentConfig config;
  std::vector<CellResult> rows;          // algorithm-major, then epsilon, seed
  std::vector<CellAggregate> aggregates;  // one per (algorithm, epsilon)
  double target_scale = 1.0;
};

SummaryStat Summarize(std::span<const double> values);

// Runs one (algorithm, epsilon, seed) cell.
CellResult RunCell(const ExperimentConfig& cfg, Algorithm algorithm,
                   double epsilon, std::uint64_t seed);

// Runs the whole grid on up to cfg.workers threads. A failing cell is
// recorded and the rest of the grid continues.
RunResult RunExperiment(const ExperimentConfig& cfg);

// Least-squares slope of ln y against ln x. Throws std::invalid_argument with
// fewer than three points or a nonpositive coordinate.
double FitLogLogSlope(std::span<const std::pair<double, double>> points);

// Writes curves/<algorithm>_eps<epsilon>_seed<seed>.csv per cell,
// summary.csv, aggregate.csv and manifest.json under dir.
void WriteResults(const RunResult& result, const std::filesystem::path& dir);

// Reads manifest.json back into a config.
ExperimentConfig ReadManifest(const std::filesystem::path& path);

// %.17g
std::string FormatDouble(double value);

}  // namespace dprelu

#endif  // DPRELU_EXPERIMENT_H_
