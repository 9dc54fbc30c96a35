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

#ifndef DPRELU_THRESHOLD_H_
#define DPRELU_THRESHOLD_H_

#include <cstddef>
#include <span>

#include "dprelu/datagen.h"
#include "dprelu/dataset.h"
#include "dprelu/rng.h"

namespace dprelu {

// Doubling search over the grid {delta_grid * 2^i : 0 <= i <= GridSteps()}.
struct ThresholdParams {
  double upsilon = 1.0;     // domain size
  double delta_grid = 1.0;  // discretization width
  double noise_multiplier = 0.0;
  bool is_public = true;  // noiseless counts

  void Validate() const;
  // ceil(log2(upsilon / delta_grid)), computed exactly by doubling.
  int GridSteps() const;
  // delta_grid * 2^GridSteps(), the largest grid value (>= upsilon).
  double GridCap() const;
};

// Clipping scale of one step: the applied clip norm s and the raw threshold
// gamma returned by the search.
struct ClipScale {
  double s = 0.0;
  double gamma = 0.0;

  friend bool operator==(const ClipScale&, const ClipScale&) = default;
};

// v * min(1, s / ||v||). Vectors inside the ball are returned unchanged.
Vector Clip(std::span<const double> v, double s);
// In-place form; returns true when v was rescaled.
bool ClipInPlace(std::span<double> v, double s);

// Number of examples with |relu(<x, w>) - y| <= s.
std::size_t CountWithin(DatasetView estimating, std::span<const double> w,
                        double s);

// Doubling search. Stops at the first grid value whose (noisy) count reaches
// m = |estimating|; private counts add N(0, GridSteps() * f^2). Returns the
// grid cap if the search never stops. Throws on an empty estimating set.
double DpThreshold(DatasetView estimating, std::span<const double> w,
                   const ThresholdParams& params, Rng& rng);

// Same search on precomputed absolute residuals.
double DpThresholdOnResiduals(std::span<const double> abs_residuals,
                              const ThresholdParams& params, Rng& rng);

// s = sqrt(2 alpha tr(H)) * c2 * (ln n)^{2a} * gamma.
ClipScale MakeClipScale(double gamma, double alpha, double trace_h, double c2,
                        double a, std::size_t n);

// Domain and width from ground truth: upsilon = c2 R_x (||w*||_H + sigma)
// (ln n)^{2a}, delta_grid = (||w*||_H + sigma) / n^2, with b_x taken from
// `tail`.
ThresholdParams SyntheticThresholdParams(const GroundTruth& gt,
                                         const TailParams& tail,
                                         std::size_t n);

// Domain and width from data: upsilon = 4 max |y| (the residual magnitude at
// w = 0), delta_grid = upsilon / 2^16.
ThresholdParams DataThresholdParams(DatasetView train);

}  // namespace dprelu

#endif  // DPRELU_THRESHOLD_H_
