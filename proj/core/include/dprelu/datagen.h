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

#ifndef DPRELU_DATAGEN_H_
#define DPRELU_DATAGEN_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "dprelu/covariance.h"
#include "dprelu/dataset.h"
#include "dprelu/rng.h"

namespace dprelu {

// All three designs are symmetric (x and -x have the same law).
enum class Design { kGaussian, kRademacher, kUniformCube };

std::string_view DesignName(Design design);
// Accepts "gaussian", "rademacher", "uniform_cube".
Design ParseDesign(std::string_view name);

// Well-specified ReLU model: x ~ design with covariance cov,
// y = relu(<x, w_star>) + sigma * N(0, 1).
struct GroundTruth {
  ModelVector w_star;
  double sigma = 0.0;
  CovarianceSpec cov = CovarianceSpec::Identity(1);
  Design design = Design::kGaussian;

  std::size_t dim() const { return w_star.size(); }
  // E[x x^T]. Equals cov except for the uniform cube, whose entries have
  // variance 1/3.
  CovarianceSpec EffectiveCovariance() const;
  // Throws std::invalid_argument when inconsistent.
  void Validate() const;
};

// Sub-Gaussian tail constants. a = 1/2 and C2 = 2 are configurable defaults;
// b_x is usually 1/N.
struct TailParams {
  double c2 = 2.0;
  double a = 0.5;
  double b_x = 0.01;

  void Validate() const;
};

// Fourth-moment constant alpha. 3 for every supported design.
double DesignAlpha(Design design);

// R_x^2 = alpha * tr(H) * log^{2a}(1 / b_x).
double TailRadiusSquared(double alpha, double trace_h, const TailParams& tail);

// One draw of x.
Vector SampleDesign(const GroundTruth& gt, Rng& rng);

// relu(<x, w_star>) + sigma * N(0, 1). No normal is drawn when sigma is 0.
double SampleLabel(const GroundTruth& gt, std::span<const double> x, Rng& rng);

// n i.i.d. examples. Example i is drawn from Rng(seed).Substream(i), so the
// result does not depend on generation order.
Dataset GenerateDataset(const GroundTruth& gt, std::size_t n,
                        std::uint64_t seed);

// Fills examples [begin, end) of an n-example dataset; used to generate index
// ranges concurrently. `out` must already hold n examples.
void GenerateRange(const GroundTruth& gt, std::uint64_t seed,
                   std::size_t begin, std::size_t end, Dataset& out);

// Uniform on the sphere of radius `norm`.
ModelVector SampleWStar(std::size_t dim, double norm, Rng& rng);

// Monte-Carlo estimate of E[x x^T 1[<x, u> > 0]] for a random unit u,
// compared entrywise against H / 2.
struct SymmetryMomentReport {
  Vector direction;
  double max_deviation = 0.0;
  std::size_t samples = 0;
};
SymmetryMomentReport CheckSymmetryMoment(const GroundTruth& gt,
                                         std::size_t n_samples,
                                         std::uint64_t seed);

// Max entrywise |empirical E[x x^T] - H|.
struct CovarianceReport {
  double max_deviation = 0.0;
  std::size_t samples = 0;
};
CovarianceReport CheckCovariance(const GroundTruth& gt, std::size_t n_samples,
                                 std::uint64_t seed);

// Top eigenvalue of the MC estimate of E[x x^T A x x^T] for a random PSD A
// normalized to tr(HA) = 1, alongside ||H||.
struct FourthMomentReport {
  double top_eigenvalue = 0.0;
  double h_norm = 0.0;
  std::size_t samples = 0;
};
FourthMomentReport CheckFourthMoment(const GroundTruth& gt,
                                     std::size_t n_samples,
                                     std::uint64_t seed);

// Empirical (1 - b_x)-quantile of ||x||^2 against the tail bound
// C2 * E||x||^2 * log^{2a}(1 / b_x).
struct TailReport {
  double quantile = 0.0;
  double bound = 0.0;
  std::size_t samples = 0;
  bool within_bound() const { return quantile <= bound; }
};
TailReport CheckTail(const GroundTruth& gt, const TailParams& tail,
                     std::size_t n_samples, std::uint64_t seed);

}  // namespace dprelu

#endif  // DPRELU_DATAGEN_H_
