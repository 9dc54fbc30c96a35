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

#ifndef DPRELU_RISK_H_
#define DPRELU_RISK_H_

#include <cstddef>
#include <cstdint>
#include <span>

#include "dprelu/datagen.h"

namespace dprelu {

// Monte-Carlo estimate with its standard error.
struct RiskEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Empirical risk over n_samples fresh draws from gt, drawn with
// GenerateDataset(gt, n_samples, seed).
RiskEstimate PopulationRiskMc(std::span<const double> w, const GroundTruth& gt,
                              std::size_t n_samples, std::uint64_t seed);

// L(w) - L(w_star) on one shared sample (common random numbers). The standard
// error is that of the per-sample loss difference. Exactly zero when
// w == w_star.
RiskEstimate ExcessRisk(std::span<const double> w,
                        std::span<const double> w_star, const GroundTruth& gt,
                        std::size_t n_samples, std::uint64_t seed);

// Same, on an already drawn evaluation sample.
RiskEstimate ExcessRisk(std::span<const double> w,
                        std::span<const double> w_star, DatasetView sample);

}  // namespace dprelu

#endif  // DPRELU_RISK_H_
