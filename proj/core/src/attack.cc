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

#include "dprelu/attack.h"

#include <cmath>
#include <stdexcept>

#include "dprelu/core_model.h"
#include "dprelu/numeric.h"

namespace dprelu {

double AttackStatistic(std::span<const double> w_ref,
                       std::span<const double> m_out,
                       const ExampleView& example) {
  if (w_ref.size() != m_out.size() || w_ref.size() != example.x.size()) {
    throw std::invalid_argument("AttackStatistic: dimension mismatch");
  }
  const double z = Dot(w_ref, example.x);
  if (!(z > 0.0)) return 0.0;
  const double residual = example.y - z;
  double acc = 0.0;
  for (std::size_t i = 0; i < w_ref.size(); ++i) {
    acc += (m_out[i] - w_ref[i]) * residual * example.x[i];
  }
  return acc;
}

AttackReport MembershipExperiment(const Mechanism& mechanism,
                                  const GroundTruth& gt,
                                  const MembershipConfig& cfg) {
  if (cfg.trials == 0) {
    throw std::invalid_argument("MembershipExperiment: trials must be >= 1");
  }
  if (cfg.n == 0 || cfg.n_fresh == 0) {
    throw std::invalid_argument(
        "MembershipExperiment: n and n_fresh must be >= 1");
  }
  gt.Validate();

  RunningStats in_stats;
  RunningStats out_stats;
  CompensatedSum trial_sums;
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    const Rng trial_rng = Rng(cfg.seed).Substream(trial);
    GroundTruth truth = gt;
    if (cfg.resample_w_star) {
      Rng w_rng = trial_rng.Substream(0);
      truth.w_star = SampleWStar(gt.dim(), cfg.w_star_norm, w_rng);
    }
    const Dataset members =
        GenerateDataset(truth, cfg.n, trial_rng.Substream(1).seed());
    const Dataset fresh =
        GenerateDataset(truth, cfg.n_fresh, trial_rng.Substream(2).seed());
    const ModelVector model =
        mechanism(members, trial_rng.Substream(3).seed());
    if (model.size() != gt.dim()) {
      throw std::runtime_error(
          "MembershipExperiment: mechanism returned wrong dimension");
    }

    CompensatedSum trial_sum;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const double t = AttackStatistic(truth.w_star, model, members[i]);
      in_stats.Add(t);
      trial_sum.Add(t);
    }
    trial_sums.Add(trial_sum.Total());
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      out_stats.Add(AttackStatistic(truth.w_star, model, fresh[i]));
    }
  }

  AttackReport report;
  report.in_mean = in_stats.Mean();
  report.out_mean = out_stats.Mean();
  report.in_sum = trial_sums.Total() / static_cast<double>(cfg.trials);
  report.in_se = in_stats.StandardError();
  report.out_se = out_stats.StandardError();
  report.n_in = in_stats.count();
  report.n_out = out_stats.count();
  const double se = std::sqrt(report.in_se * report.in_se +
                              report.out_se * report.out_se);
  report.separation_z =
      se > 0.0 ? (report.in_mean - report.out_mean) / se : 0.0;
  return report;
}

}  // namespace dprelu
