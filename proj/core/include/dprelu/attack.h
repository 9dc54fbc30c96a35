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

#ifndef DPRELU_ATTACK_H_
#define DPRELU_ATTACK_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "dprelu/datagen.h"
#include "dprelu/dataset.h"

namespace dprelu {

// Tracing statistic <m_out - w_ref, (y - relu(<w_ref, x>)) x 1[<w_ref, x> > 0]>.
double AttackStatistic(std::span<const double> w_ref,
                       std::span<const double> m_out,
                       const ExampleView& example);

// A training mechanism under attack: maps a dataset and a seed to a model.
using Mechanism =
    std::function<ModelVector(const Dataset& train, std::uint64_t seed)>;

struct MembershipConfig {
  std::size_t n = 200;         // members per trial
  std::size_t n_fresh = 1000;  // non-members per trial
  std::size_t trials = 20;
  std::uint64_t seed = 0;
  // Draw a fresh w_star uniformly on the sphere of this radius every trial.
  // Otherwise the ground truth's own w_star is used throughout.
  bool resample_w_star = true;
  double w_star_norm = 1.0;
};

struct AttackReport {
  double in_mean = 0.0;
  double out_mean = 0.0;
  // Sum of member statistics per trial, averaged over trials.
  double in_sum = 0.0;
  double in_se = 0.0;
  double out_se = 0.0;
  std::size_t n_in = 0;
  std::size_t n_out = 0;
  // (in_mean - out_mean) / sqrt(in_se^2 + out_se^2); 0 when both are zero.
  double separation_z = 0.0;
};

// Per trial: draw n members and n_fresh non-members from gt, train the
// mechanism on the members, and score both groups against w_ref = w_star.
// Trial t uses Rng(seed).Substream(t) and is independent of the others.
AttackReport MembershipExperiment(const Mechanism& mechanism,
                                  const GroundTruth& gt,
                                  const MembershipConfig& cfg);

}  // namespace dprelu

#endif  // DPRELU_ATTACK_H_
