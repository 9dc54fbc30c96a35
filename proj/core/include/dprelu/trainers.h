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

#ifndef DPRELU_TRAINERS_H_
#define DPRELU_TRAINERS_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dprelu/dataset.h"
#include "dprelu/privacy.h"
#include "dprelu/rng.h"
#include "dprelu/threshold.h"

namespace dprelu {

enum class Algorithm { kGlmtron, kDpGlmtron, kDpMbGlmtron, kDpSgd };

std::string_view AlgorithmName(Algorithm algorithm);
// Accepts "glmtron", "dp_glmtron", "dp_mbglmtron", "dp_sgd".
Algorithm ParseAlgorithm(std::string_view name);

// Constants of the clip-scale formula s = sqrt(2 alpha tr(H)) c2 (ln N)^{2a}
// gamma used by the mini-batch trainers.
struct ClipConstants {
  double alpha = 3.0;
  double trace_h = 1.0;
  double c2 = 2.0;
  double a = 0.5;
};

struct TrainerConfig {
  double eta = 0.01;
  // 1 is the one-pass mode the guarantees are stated for.
  int epochs = 1;
  // Mini-batch trainers: b gradient samples and m estimating samples per
  // block of b + m. DP-GLMtron ignores both.
  std::size_t batch = 32;
  std::size_t estimating = 4;
  std::uint64_t seed = 0;
  ClipConstants clip;
  // upsilon and delta_grid are read from here; the trainer sets the noise
  // multiplier and the public flag.
  ThresholdParams threshold;
  // Re-permute the data at the start of every epoch. The DP trainers always
  // shuffle.
  bool shuffle = true;
  // DP-GLMtron: recompute s_t every this many steps (1 = every step).
  std::size_t threshold_refresh = 1;
  // Keep every iterate in the trace. Long multi-epoch runs can turn this off;
  // the iterate average is tracked either way.
  bool keep_iterates = true;
  // Steps between loss evaluations; 0 picks once per epoch for multi-epoch
  // runs and ceil(T / 100) for one-pass runs.
  std::size_t eval_every = 0;

  void Validate() const;
};

struct LossRecord {
  std::size_t step = 0;
  double train_loss = 0.0;
  double test_loss = 0.0;  // NaN without a test set
};

struct EffectivePrivacy {
  PrivacyRegime regime = PrivacyRegime::kZcdp;
  double nominal_epsilon = 0.0;
  double delta = 0.0;
  double noise_multiplier = 0.0;
  // zCDP total over all epochs; NaN for the shuffle regime.
  double rho_total = 0.0;
  // Epsilon actually spent by the run. Multi-epoch runs compose.
  double effective_epsilon = 0.0;
  int epochs = 1;
  std::string warning;
};

struct TrainTrace {
  // w_0 .. w_T (empty when keep_iterates is off).
  std::vector<ModelVector> iterates;
  // One per step; empty for the non-private trainers.
  std::vector<ClipScale> thresholds;
  // ||eta * l_t|| per step, before noise.
  std::vector<double> applied_norms;
  // Gradients rescaled by clipping, per step.
  std::vector<std::size_t> clipped_counts;
  std::vector<LossRecord> losses;
  // (1/T) sum_{t=0}^{T-1} w_t.
  ModelVector final_average;
  ModelVector final_iterate;
  std::size_t num_steps = 0;
  // Non-private trainers leave this at defaults with infinite epsilon.
  EffectivePrivacy privacy;
};

// Uniformly random, seeded reordering.
Dataset Permute(const Dataset& data, Rng& rng);

// Mean of w_start .. w_{T-1}. start == 0 is the default output. Throws
// std::out_of_range unless start < T and the trace kept its iterates.
ModelVector AverageIterates(const TrainTrace& trace, std::size_t start);

// Plain GLMtron, one sample per step, from w_0 = 0.
TrainTrace RunGlmtron(const Dataset& data, const TrainerConfig& cfg,
                      const Dataset* test = nullptr);

// Non-private counterparts of the mini-batch trainers: same block layout,
// no clipping, no noise. The m estimating samples of each block are skipped.
TrainTrace RunMinibatchGlmtron(const Dataset& data, const TrainerConfig& cfg,
                               const Dataset* test = nullptr);
TrainTrace RunMinibatchSgd(const Dataset& data, const TrainerConfig& cfg,
                           const Dataset* test = nullptr);

// One sample per step. The clip threshold comes from a noiseless doubling
// search on `public_set` at the current iterate; the update is
// w - eta (clip_s(g) + 2 f s N(0, I)). Requires the shuffle regime.
TrainTrace RunDpGlmtron(const Dataset& data, const Dataset& public_set,
                        const TrainerConfig& cfg, const PrivacyParams& priv,
                        const Dataset* test = nullptr);

// Blocks of b + m: the first m samples feed a noisy doubling search whose
// result gamma sets s = MakeClipScale(gamma, ...); the other b samples give
// the mean clipped GLMtron gradient l. Update: w - eta l - (2 f s eta / b) g.
// Each epoch costs 1/f^2 zCDP. Requires the zCDP regime.
TrainTrace RunDpMbGlmtron(const Dataset& data, const TrainerConfig& cfg,
                          const PrivacyParams& priv,
                          const Dataset* test = nullptr);

// RunDpMbGlmtron with the indicator-gated ReLU gradient.
TrainTrace RunDpSgd(const Dataset& data, const TrainerConfig& cfg,
                    const PrivacyParams& priv, const Dataset* test = nullptr);

// Blocks per epoch, floor(N / (b + m)). Leftover samples are dropped.
std::size_t BlocksPerEpoch(std::size_t n, const TrainerConfig& cfg);

// Batch layout from a target step count: the largest b with
// b + max(1, ceil(b / 10)) <= floor(n / steps). Writes batch and estimating.
void ShapeMinibatchForSteps(std::size_t n, std::size_t steps,
                            TrainerConfig& cfg);

// ceil(kappa ln n) steps for the mini-batch trainers.
std::size_t DefaultMinibatchSteps(double kappa, std::size_t n);

// min(1 / (2 R_x^2), 1 / ((ln n)^{4a} c2^2 R_x^2 kappa^2 d f^2)); the second
// branch's global constant is taken as 1.
double DefaultStepSize(double rx_squared, double kappa, std::size_t dim,
                       double noise_multiplier, const TailParams& tail,
                       std::size_t n);

}  // namespace dprelu

#endif  // DPRELU_TRAINERS_H_
