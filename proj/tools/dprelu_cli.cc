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

// Command-line front end: train, sweep, attack, calibrate, check.

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "dprelu/attack.h"
#include "dprelu/datagen.h"
#include "dprelu/experiment.h"
#include "dprelu/privacy.h"
#include "dprelu/trainers.h"

namespace {

using dprelu::ExperimentConfig;
using nlohmann::json;

void ConfigureLogging() {
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("DP_RELU_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to "off".
    if (level == spdlog::level::off && std::string(env) != "off") {
      spdlog::warn("DP_RELU_LOG={} not recognized; keeping warn", env);
    } else {
      spdlog::set_level(level);
    }
  }
}

// Flags shared by every subcommand that builds an ExperimentConfig.
struct Flags {
  std::string config_path;
  std::vector<std::string> algorithms;
  std::vector<double> epsilons;
  std::optional<double> delta;
  std::optional<double> delta_power;
  std::optional<double> eta;
  std::optional<std::size_t> batch;
  std::optional<std::size_t> estimating;
  std::optional<int> epochs;
  std::optional<std::uint64_t> seed;
  std::vector<std::uint64_t> seeds;
  std::string csv;
  std::string target;
  std::vector<std::string> synthetic;
  std::string out = "results";
  std::optional<std::size_t> workers;
  std::optional<std::size_t> minibatch_steps;
  std::string threshold_mode;
  std::optional<double> upsilon;
  std::optional<double> delta_grid;
  std::optional<std::size_t> mc_samples;
};

void AddConfigFlags(CLI::App* app, Flags& f, bool single_cell) {
  app->add_option("--config", f.config_path, "JSON config file")
      ->check(CLI::ExistingFile);
  if (single_cell) {
    app->add_option("--algorithm", f.algorithms,
                    "glmtron, dp_glmtron, dp_mbglmtron or dp_sgd")
        ->expected(1);
    app->add_option("--epsilon", f.epsilons, "privacy budget")->expected(1);
  } else {
    app->add_option("--algorithm", f.algorithms, "one or more algorithms")
        ->delimiter(',');
    app->add_option("--epsilon", f.epsilons, "one or more budgets")
        ->delimiter(',');
  }
  app->add_option("--delta", f.delta, "fixed delta (default 1/N^p)");
  app->add_option("--delta-power", f.delta_power, "p in delta = 1/N^p");
  app->add_option("--eta", f.eta, "step size");
  app->add_option("--batch", f.batch, "mini-batch size b");
  app->add_option("--estimating", f.estimating, "estimating samples m");
  app->add_option("--epochs", f.epochs, "passes over the data");
  app->add_option("--seed", f.seed, "single seed");
  app->add_option("--seeds", f.seeds, "comma-separated seeds")->delimiter(',');
  app->add_option("--csv", f.csv, "CSV dataset path");
  app->add_option("--target", f.target, "target column name or index");
  app->add_option("--synthetic", f.synthetic,
                  "synthetic source as key=value: d=.. n=.. sigma=.. design=..")
      ->expected(1, 4);
  app->add_option("--out", f.out, "output directory");
  app->add_option("--workers", f.workers, "concurrent grid cells");
  app->add_option("--minibatch-steps", f.minibatch_steps,
                  "derive b and m from this many steps per epoch");
  app->add_option("--threshold-mode", f.threshold_mode,
                  "auto, theory, data or explicit");
  app->add_option("--upsilon", f.upsilon, "threshold domain (explicit mode)");
  app->add_option("--delta-grid", f.delta_grid,
                  "threshold grid width (explicit mode)");
  app->add_option("--mc-samples", f.mc_samples, "Monte-Carlo risk samples");
}

void ApplySynthetic(const std::vector<std::string>& kv, ExperimentConfig& cfg) {
  json patch = {{"source", "synthetic"}};
  for (const std::string& item : kv) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--synthetic expects key=value, got " + item);
    }
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "d") {
      patch["synthetic_d"] = std::stoul(value);
    } else if (key == "n") {
      patch["synthetic_n"] = std::stoul(value);
    } else if (key == "sigma") {
      patch["sigma"] = std::stod(value);
    } else if (key == "design") {
      patch["design"] = value;
    } else {
      throw std::invalid_argument("--synthetic: unknown key " + key);
    }
  }
  dprelu::MergeConfigJson(patch, cfg);
}

// Defaults, then the config file, then explicit flags.
ExperimentConfig BuildConfig(const Flags& f) {
  ExperimentConfig cfg;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw std::invalid_argument("cannot parse " + f.config_path + ": " +
                                  e.what());
    }
    dprelu::MergeConfigJson(j, cfg);
    spdlog::info("loaded config {}", f.config_path);
  }
  json patch = json::object();
  if (!f.algorithms.empty()) patch["algorithms"] = f.algorithms;
  if (!f.epsilons.empty()) patch["epsilons"] = f.epsilons;
  if (f.delta) patch["delta"] = *f.delta;
  if (f.delta_power) {
    patch["delta_power"] = *f.delta_power;
    if (!f.delta) patch["delta"] = nullptr;
  }
  if (f.eta) patch["eta"] = *f.eta;
  if (f.batch) patch["batch"] = *f.batch;
  if (f.estimating) patch["estimating"] = *f.estimating;
  if (f.epochs) patch["epochs"] = *f.epochs;
  if (f.seed) patch["seeds"] = std::vector<std::uint64_t>{*f.seed};
  if (!f.seeds.empty()) patch["seeds"] = f.seeds;
  if (!f.csv.empty()) {
    patch["source"] = "csv";
    patch["csv_path"] = f.csv;
  }
  if (!f.target.empty()) patch["target"] = f.target;
  if (f.workers) patch["workers"] = *f.workers;
  if (f.minibatch_steps) patch["minibatch_steps"] = *f.minibatch_steps;
  if (!f.threshold_mode.empty()) patch["threshold_mode"] = f.threshold_mode;
  if (f.upsilon) patch["upsilon"] = *f.upsilon;
  if (f.delta_grid) patch["delta_grid"] = *f.delta_grid;
  if (f.mc_samples) patch["mc_samples"] = *f.mc_samples;
  dprelu::MergeConfigJson(patch, cfg);
  if (!f.synthetic.empty()) ApplySynthetic(f.synthetic, cfg);
  cfg.Validate();
  return cfg;
}

void PrintAggregates(const dprelu::RunResult& result) {
  std::cout << "algorithm,epsilon,n_seeds,mean_final_train,std_final_train,"
               "mean_final_test,mean_excess_risk\n";
  for (const auto& agg : result.aggregates) {
    std::cout << dprelu::AlgorithmName(agg.algorithm) << ","
              << dprelu::FormatDouble(agg.epsilon) << "," << agg.n_seeds << ","
              << dprelu::FormatDouble(agg.final_train.mean) << ","
              << dprelu::FormatDouble(agg.final_train.std) << ","
              << dprelu::FormatDouble(agg.final_test.mean) << ","
              << (agg.excess_risk ? dprelu::FormatDouble(agg.excess_risk->mean)
                                  : "")
              << "\n";
  }
}

int ReportRows(const dprelu::RunResult& result) {
  int failures = 0;
  for (const auto& row : result.rows) {
    if (!row.error.empty()) {
      ++failures;
      spdlog::error("{} eps={} seed={}: {}", dprelu::AlgorithmName(row.algorithm),
                    row.epsilon, row.seed, row.error);
    } else if (!row.privacy.warning.empty()) {
      spdlog::warn("{} eps={} seed={}: {}", dprelu::AlgorithmName(row.algorithm),
                   row.epsilon, row.seed, row.privacy.warning);
    }
    spdlog::debug("{} eps={} seed={} took {:.3f}s",
                  dprelu::AlgorithmName(row.algorithm), row.epsilon, row.seed,
                  row.wall_seconds);
  }
  return failures == 0 ? 0 : 1;
}

int RunGrid(const Flags& flags) {
  const ExperimentConfig cfg = BuildConfig(flags);
  const dprelu::RunResult result = dprelu::RunExperiment(cfg);
  dprelu::WriteResults(result, flags.out);
  spdlog::info("wrote {}", flags.out);
  PrintAggregates(result);
  return ReportRows(result);
}

struct AttackFlags {
  Flags base;
  std::size_t fresh = 1000;
  std::size_t trials = 20;
};

int RunAttack(const AttackFlags& af) {
  const ExperimentConfig cfg = BuildConfig(af.base);
  if (cfg.source != dprelu::SourceKind::kSynthetic) {
    throw std::invalid_argument("attack needs a synthetic source");
  }
  const dprelu::Algorithm algorithm = cfg.algorithms.front();
  const double epsilon = cfg.epsilons.front();
  dprelu::MembershipConfig mc;
  mc.n = cfg.synthetic.n;
  mc.n_fresh = af.fresh;
  mc.trials = af.trials;
  mc.seed = cfg.seeds.front();
  mc.w_star_norm = cfg.synthetic.w_star_norm;
  const dprelu::GroundTruth gt = cfg.synthetic.MakeGroundTruth(mc.seed);

  const dprelu::Mechanism mechanism = [&](const dprelu::Dataset& train,
                                          std::uint64_t seed) {
    dprelu::TrainerConfig tc = cfg.trainer;
    tc.seed = seed;
    tc.eta = cfg.EtaFor(algorithm);
    tc.keep_iterates = false;
    const std::size_t n = train.size();
    const double delta = cfg.fixed_delta.value_or(
        std::pow(static_cast<double>(n), -cfg.delta_power));
    switch (algorithm) {
      case dprelu::Algorithm::kGlmtron:
        return dprelu::RunGlmtron(train, tc).final_average;
      case dprelu::Algorithm::kDpMbGlmtron:
        return dprelu::RunDpMbGlmtron(train, tc,
                                      dprelu::PrivacyParams::Zcdp(epsilon, delta))
            .final_average;
      case dprelu::Algorithm::kDpSgd:
        return dprelu::RunDpSgd(train, tc,
                                dprelu::PrivacyParams::Zcdp(epsilon, delta))
            .final_average;
      case dprelu::Algorithm::kDpGlmtron:
        break;
    }
    throw std::invalid_argument(
        "attack supports glmtron, dp_mbglmtron and dp_sgd");
  };
  const dprelu::AttackReport r = dprelu::MembershipExperiment(mechanism, gt, mc);
  const json out = {{"algorithm", std::string(dprelu::AlgorithmName(algorithm))},
                    {"epsilon", epsilon},
                    {"in_mean", r.in_mean},
                    {"out_mean", r.out_mean},
                    {"in_sum", r.in_sum},
                    {"in_se", r.in_se},
                    {"out_se", r.out_se},
                    {"n_in", r.n_in},
                    {"n_out", r.n_out},
                    {"separation_z", r.separation_z}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct CalibrateFlags {
  double epsilon = 1.0;
  double delta = 1e-5;
  std::size_t n = 0;
  std::string regime = "zcdp";
  double c3 = 1.0;
};

int RunCalibrate(const CalibrateFlags& c) {
  json out = {{"regime", c.regime}, {"epsilon", c.epsilon}, {"delta", c.delta}};
  if (c.regime == "zcdp") {
    const double f = dprelu::CalibrateZcdpMultiplier(c.epsilon, c.delta);
    out["noise_multiplier"] = f;
    out["rho"] = 1.0 / (f * f);
    out["achieved_epsilon"] = dprelu::ZcdpToApproxDp(1.0 / (f * f), c.delta);
  } else if (c.regime == "shuffle") {
    if (c.n == 0) throw std::invalid_argument("shuffle calibration needs --n");
    const auto s =
        dprelu::CalibrateShuffleMultiplier(c.epsilon, c.delta, c.n, c.c3);
    out["n"] = c.n;
    out["c3"] = c.c3;
    out["noise_multiplier"] = s.noise_multiplier;
    out["epsilon_bound"] = s.epsilon_bound;
    out["within_regime"] = s.within_regime;
    if (!s.within_regime) {
      spdlog::warn("epsilon {} exceeds the shuffle regime bound {}", c.epsilon,
                   s.epsilon_bound);
    }
  } else {
    throw std::invalid_argument("--regime must be zcdp or shuffle");
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct CheckFlags {
  Flags base;
  std::size_t samples = 100000;
};

int RunCheck(const CheckFlags& cf) {
  const ExperimentConfig cfg = BuildConfig(cf.base);
  const std::uint64_t seed = cfg.seeds.front();
  const dprelu::GroundTruth gt = cfg.synthetic.MakeGroundTruth(seed);
  dprelu::TailParams tail = cfg.tail;
  if (!(tail.b_x > 0.0)) tail.b_x = 1.0 / static_cast<double>(cfg.synthetic.n);
  const auto sym = dprelu::CheckSymmetryMoment(gt, cf.samples, seed);
  const auto cov = dprelu::CheckCovariance(gt, cf.samples, seed);
  const auto fourth = dprelu::CheckFourthMoment(gt, cf.samples, seed);
  const auto tr = dprelu::CheckTail(gt, tail, cf.samples, seed);
  const json out = {
      {"design", std::string(dprelu::DesignName(gt.design))},
      {"d", gt.dim()},
      {"samples", cf.samples},
      {"symmetry_max_deviation", sym.max_deviation},
      {"covariance_max_deviation", cov.max_deviation},
      {"fourth_moment_top_eigenvalue", fourth.top_eigenvalue},
      {"fourth_moment_bound", dprelu::DesignAlpha(gt.design) * fourth.h_norm},
      {"tail_quantile", tr.quantile},
      {"tail_bound", tr.bound},
      {"tail_within_bound", tr.within_bound()}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  ConfigureLogging();
  CLI::App app{"Differentially private ReLU regression"};
  app.set_version_flag("--version", std::string(dprelu::kVersion));
  app.require_subcommand(1);

  Flags train_flags;
  CLI::App* train = app.add_subcommand("train", "run one (algorithm, epsilon, seed) cell");
  AddConfigFlags(train, train_flags, true);

  Flags sweep_flags;
  CLI::App* sweep = app.add_subcommand("sweep", "run an (algorithm, epsilon, seed) grid");
  AddConfigFlags(sweep, sweep_flags, false);

  AttackFlags attack_flags;
  CLI::App* attack = app.add_subcommand("attack", "membership-inference experiment");
  AddConfigFlags(attack, attack_flags.base, true);
  attack->add_option("--fresh", attack_flags.fresh, "non-members per trial");
  attack->add_option("--trials", attack_flags.trials, "independent trials");

  CalibrateFlags cal;
  CLI::App* calibrate = app.add_subcommand("calibrate", "print the noise multiplier");
  calibrate->add_option("--epsilon", cal.epsilon)->required();
  calibrate->add_option("--delta", cal.delta)->required();
  calibrate->add_option("--n", cal.n, "dataset size (shuffle regime)");
  calibrate->add_option("--regime", cal.regime, "zcdp or shuffle")
      ->check(CLI::IsMember({"zcdp", "shuffle"}));
  calibrate->add_option("--c3", cal.c3, "shuffle-regime constant");

  CheckFlags check_flags;
  CLI::App* check = app.add_subcommand("check", "distributional diagnostics");
  AddConfigFlags(check, check_flags.base, true);
  check->add_option("--samples", check_flags.samples, "Monte-Carlo draws");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      if (train_flags.algorithms.empty()) {
        train_flags.algorithms = {"dp_mbglmtron"};
      }
      return RunGrid(train_flags);
    }
    if (*sweep) return RunGrid(sweep_flags);
    if (*attack) {
      if (attack_flags.base.algorithms.empty()) {
        attack_flags.base.algorithms = {"glmtron"};
      }
      return RunAttack(attack_flags);
    }
    if (*calibrate) return RunCalibrate(cal);
    if (*check) return RunCheck(check_flags);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
  return 0;
}
