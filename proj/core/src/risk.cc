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

#include "dprelu/risk.h"

#include <stdexcept>

#include "dprelu/core_model.h"
#include "dprelu/numeric.h"

namespace dprelu {

RiskEstimate PopulationRiskMc(std::span<const double> w, const GroundTruth& gt,
                              std::size_t n_samples, std::uint64_t seed) {
  if (n_samples == 0) {
    throw std::invalid_argument("PopulationRiskMc: n_samples must be >= 1");
  }
  if (w.size() != gt.dim()) {
    throw std::invalid_argument("PopulationRiskMc: dimension mismatch");
  }
  const Dataset sample = GenerateDataset(gt, n_samples, seed);
  RunningStats stats;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double r = Residual(w, sample[i]);
    stats.Add(0.5 * r * r);
  }
  return {stats.Mean(), stats.StandardError()};
}

RiskEstimate ExcessRisk(std::span<const double> w,
                        std::span<const double> w_star, const GroundTruth& gt,
                        std::size_t n_samples, std::uint64_t seed) {
  if (n_samples == 0) {
    throw std::invalid_argument("ExcessRisk: n_samples must be >= 1");
  }
  const Dataset sample = GenerateDataset(gt, n_samples, seed);
  return ExcessRisk(w, w_star, sample);
}

RiskEstimate ExcessRisk(std::span<const double> w,
                        std::span<const double> w_star, DatasetView sample) {
  if (w.size() != w_star.size() || w.size() != sample.dim()) {
    throw std::invalid_argument("ExcessRisk: dimension mismatch");
  }
  if (sample.empty()) throw std::invalid_argument("ExcessRisk: empty sample");
  RunningStats stats;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double r = Residual(w, sample[i]);
    const double r_star = Residual(w_star, sample[i]);
    stats.Add(0.5 * (r * r - r_star * r_star));
  }
  return {stats.Mean(), stats.StandardError()};
}

}  // namespace dprelu
