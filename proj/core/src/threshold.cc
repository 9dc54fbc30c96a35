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

#include "dprelu/threshold.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dprelu/core_model.h"
#include "dprelu/numeric.h"

namespace dprelu {

void ThresholdParams::Validate() const {
  if (!(delta_grid > 0.0) || !std::isfinite(delta_grid)) {
    throw std::invalid_argument("ThresholdParams: delta_grid must be > 0");
  }
  if (!(upsilon >= delta_grid) || !std::isfinite(upsilon)) {
    throw std::invalid_argument("ThresholdParams: need upsilon >= delta_grid");
  }
  if (!(noise_multiplier >= 0.0)) {
    throw std::invalid_argument("ThresholdParams: noise multiplier < 0");
  }
}

int ThresholdParams::GridSteps() const {
  int steps = 0;
  double s = delta_grid;
  while (s < upsilon) {
    s *= 2.0;
    ++steps;
  }
  return steps;
}

double ThresholdParams::GridCap() const {
  return std::ldexp(delta_grid, GridSteps());
}

Vector Clip(std::span<const double> v, double s) {
  Vector out(v.begin(), v.end());
  ClipInPlace(out, s);
  return out;
}

bool ClipInPlace(std::span<double> v, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("Clip: s must be > 0");
  const double norm = Norm2(v);
  if (norm <= s) return false;
  const double scale = s / norm;
  for (double& x : v) x *= scale;
  return true;
}

std::size_t CountWithin(DatasetView estimating, std::span<const double> w,
                        double s) {
  std::size_t count = 0;
  for (std::size_t j = 0; j < estimating.size(); ++j) {
    if (std::abs(Residual(w, estimating[j])) <= s) ++count;
  }
  return count;
}

double DpThresholdOnResiduals(std::span<const double> abs_residuals,
                              const ThresholdParams& params, Rng& rng) {
  params.Validate();
  if (abs_residuals.empty()) {
    throw std::invalid_argument("DpThreshold: empty estimating set");
  }
  const int steps = params.GridSteps();
  const auto m = static_cast<double>(abs_residuals.size());
  const double noise_std =
      params.is_public
          ? 0.0
          : params.noise_multiplier * std::sqrt(static_cast<double>(steps));

  double s = params.delta_grid;
  for (int i = 0; i <= steps; ++i) {
    std::size_t u = 0;
    for (double r : abs_residuals) {
      if (r <= s) ++u;
    }
    double u_priv = static_cast<double>(u);
    if (noise_std > 0.0) u_priv += noise_std * rng.Normal();
    if (!(u_priv < m)) return s;
    if (i < steps) s *= 2.0;
  }
  return s;
}

double DpThreshold(DatasetView estimating, std::span<const double> w,
                   const ThresholdParams& params, Rng& rng) {
  if (estimating.empty()) {
    throw std::invalid_argument("DpThreshold: empty estimating set");
  }
  std::vector<double> residuals(estimating.size());
  for (std::size_t j = 0; j < estimating.size(); ++j) {
    residuals[j] = std::abs(Residual(w, estimating[j]));
  }
  return DpThresholdOnResiduals(residuals, params, rng);
}

ClipScale MakeClipScale(double gamma, double alpha, double trace_h, double c2,
                        double a, std::size_t n) {
  const double log_factor =
      std::pow(std::log(static_cast<double>(n)), 2.0 * a);
  return {std::sqrt(2.0 * alpha * trace_h) * c2 * log_factor * gamma, gamma};
}

ThresholdParams SyntheticThresholdParams(const GroundTruth& gt,
                                         const TailParams& tail,
                                         std::size_t n) {
  gt.Validate();
  tail.Validate();
  if (n < 2) throw std::invalid_argument("SyntheticThresholdParams: n < 2");
  const CovarianceSpec h = gt.EffectiveCovariance();
  const double scale = h.Norm(gt.w_star) + gt.sigma;
  if (!(scale > 0.0)) {
    throw std::invalid_argument(
        "SyntheticThresholdParams: ||w*||_H + sigma must be > 0");
  }
  const double rx = std::sqrt(
      TailRadiusSquared(DesignAlpha(gt.design), h.Trace(), tail));
  const double nd = static_cast<double>(n);
  ThresholdParams params;
  params.delta_grid = scale / (nd * nd);
  params.upsilon = std::max(
      params.delta_grid,
      tail.c2 * rx * scale * std::pow(std::log(nd), 2.0 * tail.a));
  return params;
}

ThresholdParams DataThresholdParams(DatasetView train) {
  double max_abs = 0.0;
  for (std::size_t i = 0; i < train.size(); ++i) {
    max_abs = std::max(max_abs, std::abs(train[i].y));
  }
  ThresholdParams params;
  params.upsilon = max_abs > 0.0 ? 4.0 * max_abs : 1.0;
  params.delta_grid = std::ldexp(params.upsilon, -16);
  return params;
}

}  // namespace dprelu
