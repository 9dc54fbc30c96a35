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
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dprelu/core_model.h"
#include "dprelu/numeric.h"

namespace dprelu {

namespace {

constexpr std::uint64_t kPermuteStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
constexpr std::uint64_t kThresholdStream = 3;

enum class GradientKind { kGlmtron, kSgd };

// Records iterates, their running average and the loss curve. The average at
// step t covers w_0 .. w_{t-1}.
class TraceBuilder {
 public:
  TraceBuilder(const Dataset& train, const Dataset* test,
               const TrainerConfig& cfg, std::size_t steps_per_epoch)
      : train_(train),
        test_(test),
        keep_iterates_(cfg.keep_iterates),
        sums_(train.dim()) {
    total_steps_ = steps_per_epoch * static_cast<std::size_t>(cfg.epochs);
    if (cfg.eval_every > 0) {
      eval_every_ = cfg.eval_every;
    } else if (cfg.epochs > 1) {
      eval_every_ = steps_per_epoch;
    } else {
      eval_every_ = std::max<std::size_t>(1, (total_steps_ + 99) / 100);
    }
  }

  void Start(const ModelVector& w0) {
    if (keep_iterates_) trace_.iterates.push_back(w0);
  }

  // Call with w_t just before it is updated.
  void BeforeUpdate(const ModelVector& w) {
    for (std::size_t i = 0; i < w.size(); ++i) sums_[i].Add(w[i]);
    ++count_;
  }

  // Call with w_{t+1}.
  void AfterUpdate(const ModelVector& w) {
    if (keep_iterates_) trace_.iterates.push_back(w);
    if (count_ % eval_every_ == 0 || count_ == total_steps_) Evaluate();
  }

  void RecordStep(const ClipScale& scale, double applied_norm,
                  std::size_t clipped, bool is_private) {
    if (is_private) {
      trace_.thresholds.push_back(scale);
      trace_.clipped_counts.push_back(clipped);
    }
    trace_.applied_norms.push_back(applied_norm);
  }

  TrainTrace Finish(const ModelVector& w) {
    trace_.final_average = Average();
    trace_.final_iterate = w;
    trace_.num_steps = count_;
    if (trace_.losses.empty() || trace_.losses.back().step != count_) {
      Evaluate();
    }
    return std::move(trace_);
  }

 private:
  ModelVector Average() const {
    ModelVector avg(sums_.size(), 0.0);
    if (count_ == 0) return avg;
    for (std::size_t i = 0; i < avg.size(); ++i) {
      avg[i] = sums_[i].Total() / static_cast<double>(count_);
    }
    return avg;
  }

  void Evaluate() {
    const ModelVector avg = Average();
    LossRecord rec;
    rec.step = count_;
    rec.train_loss = EmpiricalRisk(avg, train_);
    rec.test_loss = test_ != nullptr && !test_->empty()
                        ? EmpiricalRisk(avg, *test_)
                        : std::numeric_limits<double>::quiet_NaN();
    trace_.losses.push_back(rec);
  }

  const Dataset& train_;
  const Dataset* test_;
  bool keep_iterates_;
  std::vector<CompensatedSum> sums_;
  std::size_t count_ = 0;
  std::size_t total_steps_ = 0;
  std::size_t eval_every_ = 1;
  TrainTrace trace_;
};

void CheckData(const Dataset& data, const Dataset* test, const char* where) {
  if (data.empty()) {
    throw std::invalid_argument(std::string(where) + ": empty training data");
  }
  if (test != nullptr && test->dim() != data.dim()) {
    throw std::invalid_argument(std::string(where) +
                                ": test set dimension mismatch");
  }
}

Rng EpochRng(const TrainerConfig& cfg, int epoch) {
  return Rng(cfg.seed)
      .Substream(kPermuteStream)
      .Substream(static_cast<std::uint64_t>(epoch));
}

Dataset EpochOrder(const Dataset& data, const TrainerConfig& cfg, int epoch,
                   bool shuffle) {
  if (!shuffle) return data;
  Rng rng = EpochRng(cfg, epoch);
  return Permute(data, rng);
}

void Accumulate(std::span<const double> w, const ExampleView& ex,
                GradientKind kind, Vector& out) {
  out = kind == GradientKind::kGlmtron ? GlmtronGradient(w, ex)
                                       : SgdGradient(w, ex);
}

EffectivePrivacy NonPrivateReport(int epochs) {
  EffectivePrivacy p;
  p.nominal_epsilon = std::numeric_limits<double>::infinity();
  p.effective_epsilon = std::numeric_limits<double>::infinity();
  p.rho_total = std::numeric_limits<double>::infinity();
  p.noise_multiplier = 0.0;
  p.epochs = epochs;
  return p;
}

EffectivePrivacy ZcdpReport(const PrivacyParams& priv, int epochs,
                            std::size_t blocks) {
  EffectivePrivacy p;
  p.regime = PrivacyRegime::kZcdp;
  p.nominal_epsilon = priv.epsilon;
  p.delta = priv.delta;
  p.noise_multiplier = priv.noise_multiplier;
  p.epochs = epochs;
  if (priv.noise_multiplier == 0.0) {
    p.rho_total = std::numeric_limits<double>::infinity();
    p.effective_epsilon = std::numeric_limits<double>::infinity();
    return p;
  }
  const double f2 = priv.noise_multiplier * priv.noise_multiplier;
  // Per block: 1/(2 f^2) for the threshold search plus 1/(2 f^2) for the
  // gradient step. Blocks are disjoint, so an epoch costs the per-block
  // amount; epochs compose sequentially.
  const double per_block = 1.0 / (2.0 * f2) + 1.0 / (2.0 * f2);
  ZcdpLedger epoch_ledger;
  for (std::size_t t = 0; t < blocks; ++t) {
    epoch_ledger = epoch_ledger.ComposeParallel(ZcdpLedger(per_block));
  }
  ZcdpLedger ledger;
  for (int e = 0; e < epochs; ++e) {
    ledger = ledger.ComposeSequential(epoch_ledger.rho());
  }
  p.rho_total = ledger.rho();
  p.effective_epsilon = ledger.Epsilon(priv.delta);
  if (epochs > 1) {
    p.warning = "multi-epoch run: effective epsilon " +
                std::to_string(p.effective_epsilon) + " exceeds nominal " +
                std::to_string(priv.epsilon);
  }
  return p;
}

EffectivePrivacy ShuffleReport(const PrivacyParams& priv, int epochs) {
  EffectivePrivacy p;
  p.regime = PrivacyRegime::kShuffleAmplified;
  p.nominal_epsilon = priv.epsilon;
  p.delta = priv.delta;
  p.noise_multiplier = priv.noise_multiplier;
  p.epochs = epochs;
  p.rho_total = std::numeric_limits<double>::quiet_NaN();
  if (priv.noise_multiplier == 0.0) {
    p.effective_epsilon = std::numeric_limits<double>::infinity();
    return p;
  }
  // Basic composition across passes.
  p.effective_epsilon = priv.epsilon * static_cast<double>(epochs);
  p.warning = priv.warning;
  if (epochs > 1) {
    if (!p.warning.empty()) p.warning += "; ";
    p.warning += "multi-epoch run: effective epsilon composes across passes";
  }
  return p;
}

// Mini-batch loop shared by the DP trainers and their non-private
// counterparts. With priv == nullptr there is no clipping and no noise.
TrainTrace RunMinibatch(const Dataset& data, const TrainerConfig& cfg,
                        const Dataset* test, GradientKind kind,
                        const PrivacyParams* priv, const char* where) {
  cfg.Validate();
  CheckData(data, test, where);
  const std::size_t n = data.size();
  const std::size_t b = cfg.batch;
  const std::size_t m = cfg.estimating;
  if (n < b + m) {
    throw std::invalid_argument(std::string(where) + ": N = " +
                                std::to_string(n) + " < b + m = " +
                                std::to_string(b + m));
  }
  const std::size_t blocks = BlocksPerEpoch(n, cfg);
  const bool is_private = priv != nullptr;
  const double f = is_private ? priv->noise_multiplier : 0.0;

  ThresholdParams tparams = cfg.threshold;
  tparams.noise_multiplier = f;
  tparams.is_public = false;
  if (is_private) tparams.Validate();

  const bool shuffle = cfg.shuffle || is_private;
  Rng noise_rng = Rng(cfg.seed).Substream(kNoiseStream);
  Rng threshold_rng = Rng(cfg.seed).Substream(kThresholdStream);

  const std::size_t d = data.dim();
  ModelVector w(d, 0.0);
  TraceBuilder builder(data, test, cfg, blocks);
  builder.Start(w);

  Vector grad(d);
  Vector step(d);
  std::vector<double> residuals(m);
  const double inv_b = 1.0 / static_cast<double>(b);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const Dataset order = EpochOrder(data, cfg, epoch, shuffle);
    for (std::size_t t = 0; t < blocks; ++t) {
      const std::size_t start = t * (b + m);
      ClipScale scale;
      if (is_private) {
        for (std::size_t j = 0; j < m; ++j) {
          residuals[j] = std::abs(Residual(w, order[start + j]));
        }
        const double gamma =
            DpThresholdOnResiduals(residuals, tparams, threshold_rng);
        scale = MakeClipScale(gamma, cfg.clip.alpha, cfg.clip.trace_h,
                              cfg.clip.c2, cfg.clip.a, n);
      }

      std::fill(step.begin(), step.end(), 0.0);
      std::size_t clipped = 0;
      for (std::size_t i = 0; i < b; ++i) {
        Accumulate(w, order[start + m + i], kind, grad);
        if (is_private && ClipInPlace(grad, scale.s)) ++clipped;
        for (std::size_t k = 0; k < d; ++k) step[k] += grad[k];
      }
      for (double& v : step) v *= inv_b;

      builder.BeforeUpdate(w);
      for (std::size_t k = 0; k < d; ++k) w[k] -= cfg.eta * step[k];
      if (is_private && f > 0.0) {
        const double noise_std = 2.0 * f * scale.s * cfg.eta * inv_b;
        for (std::size_t k = 0; k < d; ++k) {
          w[k] -= noise_std * noise_rng.Normal();
        }
      }
      builder.RecordStep(scale, cfg.eta * Norm2(step), clipped, is_private);
      builder.AfterUpdate(w);
    }
  }
  TrainTrace trace = builder.Finish(w);
  trace.privacy = is_private ? ZcdpReport(*priv, cfg.epochs, blocks)
                             : NonPrivateReport(cfg.epochs);
  return trace;
}

}  // namespace

std::string_view AlgorithmName(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kGlmtron:
      return "glmtron";
    case Algorithm::kDpGlmtron:
      return "dp_glmtron";
    case Algorithm::kDpMbGlmtron:
      return "dp_mbglmtron";
    case Algorithm::kDpSgd:
      return "dp_sgd";
  }
  return "unknown";
}

Algorithm ParseAlgorithm(std::string_view name) {
  if (name == "glmtron") return Algorithm::kGlmtron;
  if (name == "dp_glmtron") return Algorithm::kDpGlmtron;
  if (name == "dp_mbglmtron") return Algorithm::kDpMbGlmtron;
  if (name == "dp_sgd") return Algorithm::kDpSgd;
  throw std::invalid_argument("unknown algorithm: " + std::string(name));
}

void TrainerConfig::Validate() const {
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw std::invalid_argument("TrainerConfig: eta must be >= 0");
  }
  if (epochs < 1) throw std::invalid_argument("TrainerConfig: epochs < 1");
  if (batch < 1) throw std::invalid_argument("TrainerConfig: batch < 1");
  if (estimating < 1) {
    throw std::invalid_argument("TrainerConfig: estimating must be >= 1");
  }
  if (threshold_refresh < 1) {
    throw std::invalid_argument("TrainerConfig: threshold_refresh < 1");
  }
}

Dataset Permute(const Dataset& data, Rng& rng) {
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = idx.size(); i > 1; --i) {
    std::swap(idx[i - 1], idx[rng.Index(i)]);
  }
  return data.Select(idx);
}

ModelVector AverageIterates(const TrainTrace& trace, std::size_t start) {
  if (trace.iterates.size() < 2) {
    throw std::out_of_range("AverageIterates: trace has no kept iterates");
  }
  const std::size_t t_end = trace.iterates.size() - 1;  // T
  if (start >= t_end) {
    throw std::out_of_range("AverageIterates: start must be < T");
  }
  const std::size_t d = trace.iterates.front().size();
  std::vector<CompensatedSum> sums(d);
  for (std::size_t t = start; t < t_end; ++t) {
    for (std::size_t i = 0; i < d; ++i) sums[i].Add(trace.iterates[t][i]);
  }
  ModelVector avg(d);
  for (std::size_t i = 0; i < d; ++i) {
    avg[i] = sums[i].Total() / static_cast<double>(t_end - start);
  }
  return avg;
}

TrainTrace RunGlmtron(const Dataset& data, const TrainerConfig& cfg,
                      const Dataset* test) {
  cfg.Validate();
  CheckData(data, test, "RunGlmtron");
  const std::size_t d = data.dim();
  ModelVector w(d, 0.0);
  TraceBuilder builder(data, test, cfg, data.size());
  builder.Start(w);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const Dataset order = EpochOrder(data, cfg, epoch, cfg.shuffle);
    for (std::size_t t = 0; t < order.size(); ++t) {
      const Vector g = GlmtronGradient(w, order[t]);
      builder.BeforeUpdate(w);
      for (std::size_t k = 0; k < d; ++k) w[k] -= cfg.eta * g[k];
      builder.RecordStep({}, cfg.eta * Norm2(g), 0, false);
      builder.AfterUpdate(w);
    }
  }
  TrainTrace trace = builder.Finish(w);
  trace.privacy = NonPrivateReport(cfg.epochs);
  return trace;
}

TrainTrace RunMinibatchGlmtron(const Dataset& data, const TrainerConfig& cfg,
                               const Dataset* test) {
  return RunMinibatch(data, cfg, test, GradientKind::kGlmtron, nullptr,
                      "RunMinibatchGlmtron");
}

TrainTrace RunMinibatchSgd(const Dataset& data, const TrainerConfig& cfg,
                           const Dataset* test) {
  return RunMinibatch(data, cfg, test, GradientKind::kSgd, nullptr,
                      "RunMinibatchSgd");
}

TrainTrace RunDpGlmtron(const Dataset& data, const Dataset& public_set,
                        const TrainerConfig& cfg, const PrivacyParams& priv,
                        const Dataset* test) {
  cfg.Validate();
  priv.Validate();
  CheckData(data, test, "RunDpGlmtron");
  if (public_set.empty()) {
    throw std::invalid_argument("RunDpGlmtron: empty public set");
  }
  if (public_set.dim() != data.dim()) {
    throw std::invalid_argument("RunDpGlmtron: public set dimension mismatch");
  }
  if (priv.regime != PrivacyRegime::kShuffleAmplified) {
    throw std::invalid_argument(
        "RunDpGlmtron: requires the shuffle_amplified regime");
  }
  ThresholdParams tparams = cfg.threshold;
  tparams.noise_multiplier = priv.noise_multiplier;
  tparams.is_public = true;
  tparams.Validate();

  const double f = priv.noise_multiplier;
  Rng noise_rng = Rng(cfg.seed).Substream(kNoiseStream);
  Rng threshold_rng = Rng(cfg.seed).Substream(kThresholdStream);
  const std::size_t d = data.dim();
  ModelVector w(d, 0.0);
  TraceBuilder builder(data, test, cfg, data.size());
  builder.Start(w);

  ClipScale scale;
  std::size_t step_index = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const Dataset order = EpochOrder(data, cfg, epoch, true);
    for (std::size_t t = 0; t < order.size(); ++t, ++step_index) {
      if (step_index % cfg.threshold_refresh == 0) {
        const double s = DpThreshold(public_set, w, tparams, threshold_rng);
        scale = {s, s};
      }
      Vector g = GlmtronGradient(w, order[t]);
      const bool clipped = ClipInPlace(g, scale.s);
      builder.BeforeUpdate(w);
      if (f > 0.0) {
        const double noise_std = 2.0 * f * scale.s;
        for (std::size_t k = 0; k < d; ++k) {
          w[k] -= cfg.eta * (g[k] + noise_std * noise_rng.Normal());
        }
      } else {
        for (std::size_t k = 0; k < d; ++k) w[k] -= cfg.eta * g[k];
      }
      builder.RecordStep(scale, cfg.eta * Norm2(g), clipped ? 1 : 0, true);
      builder.AfterUpdate(w);
    }
  }
  TrainTrace trace = builder.Finish(w);
  trace.privacy = ShuffleReport(priv, cfg.epochs);
  return trace;
}

TrainTrace RunDpMbGlmtron(const Dataset& data, const TrainerConfig& cfg,
                          const PrivacyParams& priv, const Dataset* test) {
  priv.Validate();
  if (priv.regime != PrivacyRegime::kZcdp) {
    throw std::invalid_argument("RunDpMbGlmtron: requires the zcdp regime");
  }
  return RunMinibatch(data, cfg, test, GradientKind::kGlmtron, &priv,
                      "RunDpMbGlmtron");
}

TrainTrace RunDpSgd(const Dataset& data, const TrainerConfig& cfg,
                    const PrivacyParams& priv, const Dataset* test) {
  priv.Validate();
  if (priv.regime != PrivacyRegime::kZcdp) {
    throw std::invalid_argument("RunDpSgd: requires the zcdp regime");
  }
  return RunMinibatch(data, cfg, test, GradientKind::kSgd, &priv, "RunDpSgd");
}

std::size_t BlocksPerEpoch(std::size_t n, const TrainerConfig& cfg) {
  return n / (cfg.batch + cfg.estimating);
}

void ShapeMinibatchForSteps(std::size_t n, std::size_t steps,
                            TrainerConfig& cfg) {
  if (steps == 0 || n / steps < 2) {
    throw std::invalid_argument(
        "ShapeMinibatchForSteps: need at least 2 samples per step");
  }
  const std::size_t block = n / steps;
  std::size_t b = block - 1;
  auto m_for = [](std::size_t batch) {
    return std::max<std::size_t>(1, (batch + 9) / 10);
  };
  while (b > 1 && b + m_for(b) > block) --b;
  cfg.batch = b;
  cfg.estimating = m_for(b);
}

std::size_t DefaultMinibatchSteps(double kappa, std::size_t n) {
  return static_cast<std::size_t>(
      std::ceil(kappa * std::log(static_cast<double>(n))));
}

double DefaultStepSize(double rx_squared, double kappa, std::size_t dim,
                       double noise_multiplier, const TailParams& tail,
                       std::size_t n) {
  const double first = 1.0 / (2.0 * rx_squared);
  if (noise_multiplier <= 0.0) return first;
  const double log_n = std::log(static_cast<double>(n));
  const double second =
      1.0 / (std::pow(log_n, 4.0 * tail.a) * tail.c2 * tail.c2 * rx_squared *
             kappa * kappa * static_cast<double>(dim) * noise_multiplier *
             noise_multiplier);
  return std::min(first, second);
}

}  // namespace dprelu
