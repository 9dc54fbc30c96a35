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
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "dprelu/numeric.h"
#include "dprelu/preprocess.h"
#include "dprelu/risk.h"

namespace dprelu {

namespace {

using nlohmann::json;

constexpr std::uint64_t kWStarStream = 100;
constexpr std::uint64_t kTrainStream = 101;
constexpr std::uint64_t kTestStream = 102;
constexpr std::uint64_t kPublicStream = 103;
constexpr std::uint64_t kMcStream = 104;
constexpr std::uint64_t kSplitStream = 105;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Data for every cell that shares a seed.
struct PreparedData {
  std::optional<GroundTruth> gt;
  Dataset train{1};
  Dataset test{1};
  Dataset public_set{1};
  std::optional<Dataset> mc_sample;
  double target_scale = 1.0;
};

std::string_view ThresholdModeName(ThresholdMode mode) {
  switch (mode) {
    case ThresholdMode::kAuto:
      return "auto";
    case ThresholdMode::kTheory:
      return "theory";
    case ThresholdMode::kData:
      return "data";
    case ThresholdMode::kExplicit:
      return "explicit";
  }
  return "auto";
}

ThresholdMode ParseThresholdMode(std::string_view name) {
  if (name == "auto") return ThresholdMode::kAuto;
  if (name == "theory") return ThresholdMode::kTheory;
  if (name == "data") return ThresholdMode::kData;
  if (name == "explicit") return ThresholdMode::kExplicit;
  throw std::invalid_argument("unknown threshold mode: " + std::string(name));
}

PreparedData Prepare(const ExperimentConfig& cfg, std::uint64_t seed,
                     const std::optional<Dataset>& csv_data) {
  PreparedData out;
  const Rng root(seed);
  if (cfg.source == SourceKind::kSynthetic) {
    const SyntheticSource& src = cfg.synthetic;
    out.gt = src.MakeGroundTruth(seed);
    out.train = GenerateDataset(*out.gt, src.n, root.Substream(kTrainStream).seed());
    const auto n_test = static_cast<std::size_t>(std::llround(
        static_cast<double>(src.n) * cfg.test_fraction / (1.0 - cfg.test_fraction)));
    out.test = GenerateDataset(*out.gt, std::max<std::size_t>(1, n_test),
                               root.Substream(kTestStream).seed());
    out.public_set = GenerateDataset(*out.gt, std::max<std::size_t>(1, cfg.public_size),
                                     root.Substream(kPublicStream).seed());
    if (cfg.mc_samples > 0) {
      out.mc_sample = GenerateDataset(*out.gt, cfg.mc_samples,
                                      root.Substream(kMcStream).seed());
    }
    return out;
  }
  TrainTestSplit split =
      Split(*csv_data, cfg.test_fraction, root.Substream(kSplitStream).seed());
  Standardize(split.train, split.test);
  out.target_scale = NormalizeTarget(split.train, split.test);
  const std::size_t n = split.train.size();
  const std::size_t p = std::min(cfg.public_size, n / 2);
  out.public_set = split.train.Slice(n - std::max<std::size_t>(1, p), n);
  out.train = split.train.Slice(0, n - std::max<std::size_t>(1, p));
  out.test = std::move(split.test);
  return out;
}

CellResult RunPrepared(const ExperimentConfig& cfg, const PreparedData& data,
                       Algorithm algorithm, double epsilon, std::uint64_t seed) {
  CellResult cell;
  cell.algorithm = algorithm;
  cell.epsilon = epsilon;
  cell.seed = seed;
  const auto started = std::chrono::steady_clock::now();
  try {
    const std::size_t n = data.train.size();
    const double delta =
        cfg.fixed_delta.has_value()
            ? *cfg.fixed_delta
            : std::pow(static_cast<double>(n), -cfg.delta_power);

    TrainerConfig tc = cfg.trainer;
    tc.seed = seed;
    tc.eta = cfg.EtaFor(algorithm);
    if (cfg.minibatch_steps > 0 && (algorithm == Algorithm::kDpMbGlmtron ||
                                    algorithm == Algorithm::kDpSgd)) {
      ShapeMinibatchForSteps(n, cfg.minibatch_steps, tc);
    }
    TailParams tail = cfg.tail;
    if (!(tail.b_x > 0.0)) tail.b_x = 1.0 / static_cast<double>(n);

    ThresholdMode mode = cfg.threshold_mode;
    if (mode == ThresholdMode::kAuto) {
      mode = data.gt.has_value() ? ThresholdMode::kTheory : ThresholdMode::kData;
    }
    if (mode == ThresholdMode::kTheory) {
      if (!data.gt.has_value()) {
        throw std::invalid_argument("theory thresholds need a synthetic source");
      }
      tc.threshold = SyntheticThresholdParams(*data.gt, tail, n);
    } else if (mode == ThresholdMode::kData) {
      tc.threshold = DataThresholdParams(data.train);
    }

    if (data.gt.has_value()) {
      const CovarianceSpec h = data.gt->EffectiveCovariance();
      tc.clip = {DesignAlpha(data.gt->design), h.Trace(), tail.c2, tail.a};
    } else {
      tc.clip = {3.0, static_cast<double>(data.train.dim()), tail.c2, tail.a};
    }

    const bool noise_off = std::isinf(epsilon);
    const auto zcdp = [&]() {
      return noise_off ? PrivacyParams::NoiseOff(PrivacyRegime::kZcdp)
                       : PrivacyParams::Zcdp(epsilon, delta);
    };
    TrainTrace trace;
    switch (algorithm) {
      case Algorithm::kGlmtron:
        trace = RunGlmtron(data.train, tc, &data.test);
        break;
      case Algorithm::kDpGlmtron:
        trace = RunDpGlmtron(data.train, data.public_set, tc,
                             noise_off ? PrivacyParams::NoiseOff(
                                             PrivacyRegime::kShuffleAmplified)
                                       : PrivacyParams::Shuffle(
                                             epsilon, delta, n, cfg.shuffle_c3),
                             &data.test);
        break;
      case Algorithm::kDpMbGlmtron:
        trace = RunDpMbGlmtron(data.train, tc, zcdp(), &data.test);
        break;
      case Algorithm::kDpSgd:
        trace = RunDpSgd(data.train, tc, zcdp(), &data.test);
        break;
    }
    cell.curve = trace.losses;
    cell.final_train = trace.losses.back().train_loss;
    cell.final_test = trace.losses.back().test_loss;
    cell.privacy = trace.privacy;
    if (algorithm == Algorithm::kGlmtron) cell.privacy.delta = delta;
    if (data.gt.has_value() && data.mc_sample.has_value()) {
      cell.excess_risk =
          ExcessRisk(trace.final_average, data.gt->w_star, *data.mc_sample).value;
    }
  } catch (const std::exception& e) {
    cell.error = e.what();
    cell.curve.clear();
    cell.final_train = kNaN;
    cell.final_test = kNaN;
    if (data.gt.has_value()) cell.excess_risk = kNaN;
  }
  cell.wall_seconds = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - started)
                          .count();
  return cell;
}

std::optional<Dataset> LoadSource(const ExperimentConfig& cfg) {
  if (cfg.source == SourceKind::kCsv) return LoadCsv(cfg.csv.path, cfg.csv.target);
  return std::nullopt;
}

void WriteFile(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string CurveFileName(const CellResult& cell) {
  char eps[64];
  std::snprintf(eps, sizeof(eps), "%g", cell.epsilon);
  return std::string(AlgorithmName(cell.algorithm)) + "_eps" + eps + "_seed" +
         std::to_string(cell.seed) + ".csv";
}

template <typename T>
void ReadIf(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

template <typename T>
void ReadOptional(const json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    out.reset();
  } else {
    out = j.at(key).get<T>();
  }
}

template <typename T>
json OptionalToJson(const std::optional<T>& v) {
  return v.has_value() ? json(*v) : json(nullptr);
}

}  // namespace

GroundTruth SyntheticSource::MakeGroundTruth(std::uint64_t seed) const {
  GroundTruth gt;
  Rng rng = Rng(seed).Substream(kWStarStream);
  gt.w_star = SampleWStar(dim, w_star_norm, rng);
  gt.sigma = sigma;
  gt.design = design;
  gt.cov = cov_diagonal.empty() ? CovarianceSpec::Identity(dim)
                                : CovarianceSpec::Diagonal(cov_diagonal);
  gt.Validate();
  return gt;
}

void ExperimentConfig::Validate() const {
  if (algorithms.empty()) throw std::invalid_argument("config: no algorithms");
  if (epsilons.empty()) throw std::invalid_argument("config: no epsilons");
  if (seeds.empty()) throw std::invalid_argument("config: no seeds");
  for (double e : epsilons) {
    if (!(e > 0.0)) throw std::invalid_argument("config: epsilon must be > 0");
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("config: test_fraction must lie in (0, 1)");
  }
  if (fixed_delta.has_value() && !(*fixed_delta > 0.0 && *fixed_delta < 1.0)) {
    throw std::invalid_argument("config: delta must lie in (0, 1)");
  }
  if (!fixed_delta.has_value() && !(delta_power > 0.0)) {
    throw std::invalid_argument("config: delta_power must be > 0");
  }
  if (source == SourceKind::kSynthetic) {
    if (synthetic.dim == 0 || synthetic.n < 2) {
      throw std::invalid_argument("config: synthetic d >= 1 and n >= 2 required");
    }
    if (!(synthetic.sigma >= 0.0)) {
      throw std::invalid_argument("config: sigma must be >= 0");
    }
    if (!synthetic.cov_diagonal.empty() &&
        synthetic.cov_diagonal.size() != synthetic.dim) {
      throw std::invalid_argument("config: cov_diagonal must have d entries");
    }
  } else {
    if (csv.path.empty()) throw std::invalid_argument("config: csv path missing");
    if (csv.target.empty()) {
      throw std::invalid_argument("config: csv target column must be named");
    }
    if (threshold_mode == ThresholdMode::kTheory) {
      throw std::invalid_argument("config: theory thresholds need synthetic data");
    }
  }
  if (workers == 0) throw std::invalid_argument("config: workers must be >= 1");
  trainer.Validate();
}

double ExperimentConfig::EtaFor(Algorithm algorithm) const {
  const std::optional<double>* pick = nullptr;
  switch (algorithm) {
    case Algorithm::kGlmtron:
      pick = &eta_glmtron;
      break;
    case Algorithm::kDpGlmtron:
      pick = &eta_dp_glmtron;
      break;
    case Algorithm::kDpMbGlmtron:
      pick = &eta_dp_mbglmtron;
      break;
    case Algorithm::kDpSgd:
      pick = &eta_dp_sgd;
      break;
  }
  return pick->value_or(trainer.eta);
}

nlohmann::json ConfigToJson(const ExperimentConfig& cfg) {
  json j;
  j["source"] = cfg.source == SourceKind::kSynthetic ? "synthetic" : "csv";
  j["synthetic_d"] = cfg.synthetic.dim;
  j["synthetic_n"] = cfg.synthetic.n;
  j["sigma"] = cfg.synthetic.sigma;
  j["design"] = std::string(DesignName(cfg.synthetic.design));
  j["w_star_norm"] = cfg.synthetic.w_star_norm;
  j["cov_diagonal"] = cfg.synthetic.cov_diagonal;
  j["csv_path"] = cfg.csv.path;
  j["target"] = cfg.csv.target;
  std::vector<std::string> algs;
  for (Algorithm a : cfg.algorithms) algs.emplace_back(AlgorithmName(a));
  j["algorithms"] = algs;
  json eps = json::array();
  for (double e : cfg.epsilons) {
    if (std::isinf(e)) {
      eps.push_back("inf");
    } else {
      eps.push_back(e);
    }
  }
  j["epsilons"] = eps;
  j["delta"] = OptionalToJson(cfg.fixed_delta);
  j["delta_power"] = cfg.delta_power;
  j["seeds"] = cfg.seeds;
  j["eta"] = cfg.trainer.eta;
  j["epochs"] = cfg.trainer.epochs;
  j["batch"] = cfg.trainer.batch;
  j["estimating"] = cfg.trainer.estimating;
  j["shuffle"] = cfg.trainer.shuffle;
  j["threshold_refresh"] = cfg.trainer.threshold_refresh;
  j["keep_iterates"] = cfg.trainer.keep_iterates;
  j["eval_every"] = cfg.trainer.eval_every;
  j["upsilon"] = cfg.trainer.threshold.upsilon;
  j["delta_grid"] = cfg.trainer.threshold.delta_grid;
  j["threshold_mode"] = std::string(ThresholdModeName(cfg.threshold_mode));
  j["eta_glmtron"] = OptionalToJson(cfg.eta_glmtron);
  j["eta_dp_glmtron"] = OptionalToJson(cfg.eta_dp_glmtron);
  j["eta_dp_mbglmtron"] = OptionalToJson(cfg.eta_dp_mbglmtron);
  j["eta_dp_sgd"] = OptionalToJson(cfg.eta_dp_sgd);
  j["minibatch_steps"] = cfg.minibatch_steps;
  j["public_size"] = cfg.public_size;
  j["shuffle_c3"] = cfg.shuffle_c3;
  j["tail_c2"] = cfg.tail.c2;
  j["tail_a"] = cfg.tail.a;
  j["tail_b_x"] = cfg.tail.b_x;
  j["mc_samples"] = cfg.mc_samples;
  j["test_fraction"] = cfg.test_fraction;
  j["workers"] = cfg.workers;
  return j;
}

void MergeConfigJson(const nlohmann::json& j, ExperimentConfig& cfg) {
  if (!j.is_object()) throw std::invalid_argument("config: expected an object");
  try {
    if (j.contains("source")) {
      const std::string s = j.at("source").get<std::string>();
      if (s == "synthetic") {
        cfg.source = SourceKind::kSynthetic;
      } else if (s == "csv") {
        cfg.source = SourceKind::kCsv;
      } else {
        throw std::invalid_argument("config: unknown source " + s);
      }
    }
    ReadIf(j, "synthetic_d", cfg.synthetic.dim);
    ReadIf(j, "synthetic_n", cfg.synthetic.n);
    ReadIf(j, "sigma", cfg.synthetic.sigma);
    if (j.contains("design")) {
      cfg.synthetic.design = ParseDesign(j.at("design").get<std::string>());
    }
    ReadIf(j, "w_star_norm", cfg.synthetic.w_star_norm);
    ReadIf(j, "cov_diagonal", cfg.synthetic.cov_diagonal);
    ReadIf(j, "csv_path", cfg.csv.path);
    ReadIf(j, "target", cfg.csv.target);
    if (j.contains("algorithms")) {
      cfg.algorithms.clear();
      for (const auto& a : j.at("algorithms")) {
        cfg.algorithms.push_back(ParseAlgorithm(a.get<std::string>()));
      }
    }
    if (j.contains("epsilons")) {
      cfg.epsilons.clear();
      for (const auto& e : j.at("epsilons")) {
        if (e.is_string() && e.get<std::string>() == "inf") {
          cfg.epsilons.push_back(std::numeric_limits<double>::infinity());
        } else {
          cfg.epsilons.push_back(e.get<double>());
        }
      }
    }
    ReadOptional(j, "delta", cfg.fixed_delta);
    ReadIf(j, "delta_power", cfg.delta_power);
    ReadIf(j, "seeds", cfg.seeds);
    ReadIf(j, "eta", cfg.trainer.eta);
    ReadIf(j, "epochs", cfg.trainer.epochs);
    ReadIf(j, "batch", cfg.trainer.batch);
    ReadIf(j, "estimating", cfg.trainer.estimating);
    ReadIf(j, "shuffle", cfg.trainer.shuffle);
    ReadIf(j, "threshold_refresh", cfg.trainer.threshold_refresh);
    ReadIf(j, "keep_iterates", cfg.trainer.keep_iterates);
    ReadIf(j, "eval_every", cfg.trainer.eval_every);
    ReadIf(j, "upsilon", cfg.trainer.threshold.upsilon);
    ReadIf(j, "delta_grid", cfg.trainer.threshold.delta_grid);
    if (j.contains("threshold_mode")) {
      cfg.threshold_mode =
          ParseThresholdMode(j.at("threshold_mode").get<std::string>());
    }
    ReadOptional(j, "eta_glmtron", cfg.eta_glmtron);
    ReadOptional(j, "eta_dp_glmtron", cfg.eta_dp_glmtron);
    ReadOptional(j, "eta_dp_mbglmtron", cfg.eta_dp_mbglmtron);
    ReadOptional(j, "eta_dp_sgd", cfg.eta_dp_sgd);
    ReadIf(j, "minibatch_steps", cfg.minibatch_steps);
    ReadIf(j, "public_size", cfg.public_size);
    ReadIf(j, "shuffle_c3", cfg.shuffle_c3);
    ReadIf(j, "tail_c2", cfg.tail.c2);
    ReadIf(j, "tail_a", cfg.tail.a);
    ReadIf(j, "tail_b_x", cfg.tail.b_x);
    ReadIf(j, "mc_samples", cfg.mc_samples);
    ReadIf(j, "test_fraction", cfg.test_fraction);
    ReadIf(j, "workers", cfg.workers);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

ExperimentConfig ConfigFromJson(const nlohmann::json& j) {
  ExperimentConfig cfg;
  MergeConfigJson(j, cfg);
  return cfg;
}

SummaryStat Summarize(std::span<const double> values) {
  SummaryStat s;
  if (values.empty()) return {kNaN, kNaN};
  CompensatedSum sum;
  for (double v : values) sum.Add(v);
  s.mean = sum.Total() / static_cast<double>(values.size());
  if (values.size() > 1) {
    CompensatedSum sq;
    for (double v : values) sq.Add((v - s.mean) * (v - s.mean));
    s.std = std::sqrt(sq.Total() / static_cast<double>(values.size() - 1));
  }
  return s;
}

CellResult RunCell(const ExperimentConfig& cfg, Algorithm algorithm,
                   double epsilon, std::uint64_t seed) {
  cfg.Validate();
  const std::optional<Dataset> csv_data = LoadSource(cfg);
  const PreparedData data = Prepare(cfg, seed, csv_data);
  return RunPrepared(cfg, data, algorithm, epsilon, seed);
}

RunResult RunExperiment(const ExperimentConfig& cfg) {
  cfg.Validate();
  const std::optional<Dataset> csv_data = LoadSource(cfg);

  std::map<std::uint64_t, PreparedData> prepared;
  for (std::uint64_t seed : cfg.seeds) {
    if (!prepared.count(seed)) prepared.emplace(seed, Prepare(cfg, seed, csv_data));
  }

  struct CellKey {
    Algorithm algorithm;
    double epsilon;
    std::uint64_t seed;
  };
  std::vector<CellKey> keys;
  for (Algorithm a : cfg.algorithms) {
    for (double e : cfg.epsilons) {
      for (std::uint64_t s : cfg.seeds) keys.push_back({a, e, s});
    }
  }

  RunResult result;
  result.config = cfg;
  result.rows.resize(keys.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < keys.size(); i = next++) {
      const CellKey& k = keys[i];
      result.rows[i] =
          RunPrepared(cfg, prepared.at(k.seed), k.algorithm, k.epsilon, k.seed);
    }
  };
  const std::size_t n_threads = std::min(cfg.workers, keys.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  result.target_scale = prepared.begin()->second.target_scale;

  for (Algorithm a : cfg.algorithms) {
    for (double e : cfg.epsilons) {
      std::vector<double> train, test, excess;
      for (const CellResult& row : result.rows) {
        if (row.algorithm != a || row.epsilon != e || !row.error.empty()) continue;
        train.push_back(row.final_train);
        test.push_back(row.final_test);
        if (row.excess_risk.has_value()) excess.push_back(*row.excess_risk);
      }
      CellAggregate agg;
      agg.algorithm = a;
      agg.epsilon = e;
      agg.n_seeds = train.size();
      agg.final_train = Summarize(train);
      agg.final_test = Summarize(test);
      if (cfg.source == SourceKind::kSynthetic) agg.excess_risk = Summarize(excess);
      result.aggregates.push_back(agg);
    }
  }
  return result;
}

double FitLogLogSlope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) {
    throw std::invalid_argument("FitLogLogSlope: need at least 3 points");
  }
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) {
      throw std::invalid_argument("FitLogLogSlope: values must be positive");
    }
    mx += std::log(x);
    my += std::log(y);
  }
  const auto n = static_cast<double>(points.size());
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    sxy += dx * (std::log(y) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) {
    throw std::invalid_argument("FitLogLogSlope: x values are all equal");
  }
  return sxy / sxx;
}

std::string FormatDouble(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void WriteResults(const RunResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "curves");

  std::string summary =
      "algorithm,epsilon,seed,final_train,final_test,excess_risk,"
      "effective_epsilon\n";
  for (const CellResult& row : result.rows) {
    std::string curve = "step,train_loss,test_loss\n";
    for (const LossRecord& rec : row.curve) {
      curve += std::to_string(rec.step) + "," + FormatDouble(rec.train_loss) +
               "," + FormatDouble(rec.test_loss) + "\n";
    }
    WriteFile(dir / "curves" / CurveFileName(row), curve);

    summary += std::string(AlgorithmName(row.algorithm)) + "," +
               FormatDouble(row.epsilon) + "," + std::to_string(row.seed) +
               "," + FormatDouble(row.final_train) + "," +
               FormatDouble(row.final_test) + "," +
               (row.excess_risk.has_value() ? FormatDouble(*row.excess_risk) : "") +
               "," + FormatDouble(row.privacy.effective_epsilon) + "\n";
  }
  WriteFile(dir / "summary.csv", summary);

  std::string aggregate =
      "algorithm,epsilon,n_seeds,mean_final_train,std_final_train,"
      "mean_final_test,std_final_test,mean_excess_risk,std_excess_risk\n";
  for (const CellAggregate& agg : result.aggregates) {
    aggregate += std::string(AlgorithmName(agg.algorithm)) + "," +
                 FormatDouble(agg.epsilon) + "," + std::to_string(agg.n_seeds) +
                 "," + FormatDouble(agg.final_train.mean) + "," +
                 FormatDouble(agg.final_train.std) + "," +
                 FormatDouble(agg.final_test.mean) + "," +
                 FormatDouble(agg.final_test.std) + "," +
                 (agg.excess_risk ? FormatDouble(agg.excess_risk->mean) : "") +
                 "," +
                 (agg.excess_risk ? FormatDouble(agg.excess_risk->std) : "") +
                 "\n";
  }
  WriteFile(dir / "aggregate.csv", aggregate);

  json manifest = ConfigToJson(result.config);
  manifest["version"] = kVersion;
  WriteFile(dir / "manifest.json", manifest.dump(2) + "\n");
}

ExperimentConfig ReadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("bad manifest " + path.string() + ": " + e.what());
  }
  j.erase("version");
  return ConfigFromJson(j);
}

}  // namespace dprelu
