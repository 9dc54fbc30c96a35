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

#ifndef DPRELU_PRIVACY_H_
#define DPRELU_PRIVACY_H_

#include <cstddef>
#include <string>
#include <string_view>

#include "dprelu/dataset.h"
#include "dprelu/rng.h"

namespace dprelu {

// Natural logarithms throughout.

enum class PrivacyRegime { kShuffleAmplified, kZcdp };

std::string_view RegimeName(PrivacyRegime regime);

struct PrivacyParams {
  double epsilon = 1.0;
  double delta = 1e-5;
  // Ratio of noise standard deviation to per-step L2 sensitivity. Zero turns
  // every noise source off; only meaningful for equivalence testing.
  double noise_multiplier = 1.0;
  PrivacyRegime regime = PrivacyRegime::kZcdp;
  // Set when a shuffle-regime budget lies outside the range covered by the
  // amplification argument. The run proceeds; outputs carry the message.
  std::string warning;

  // Throws std::invalid_argument on out-of-range fields, or when a zCDP
  // multiplier does not achieve epsilon.
  void Validate() const;

  // (epsilon, delta) under zCDP with f from CalibrateZcdpMultiplier.
  static PrivacyParams Zcdp(double epsilon, double delta);
  // (epsilon, delta) under shuffling with f from CalibrateShuffleMultiplier.
  static PrivacyParams Shuffle(double epsilon, double delta, std::size_t n,
                               double c3 = 1.0);
  // f = 0. Reports infinite epsilon.
  static PrivacyParams NoiseOff(PrivacyRegime regime);
};

// f = sqrt(8 log(1/delta)) / epsilon when epsilon <= log(1/delta), otherwise
// f = 2 sqrt(log(1/delta) + epsilon) / epsilon. One pass of the mini-batch
// trainer with this f is 1/f^2-zCDP, which converts to (epsilon, delta)-DP.
double CalibrateZcdpMultiplier(double epsilon, double delta);

struct ShuffleCalibration {
  double noise_multiplier = 0.0;
  // sqrt(log(n / delta) / n); the amplification argument needs epsilon below
  // this, up to a constant.
  double epsilon_bound = 0.0;
  bool within_regime = false;
};

// f = c3 log(n / delta) / (epsilon sqrt(n)). A budget outside the regime is
// reported, not rejected.
ShuffleCalibration CalibrateShuffleMultiplier(double epsilon, double delta,
                                              std::size_t n, double c3 = 1.0);

// rho-zCDP implies (rho + 2 sqrt(rho log(1/delta)), delta)-DP.
double ZcdpToApproxDp(double rho, double delta);

// Accumulated zCDP cost. Sequential composition adds; parallel composition
// over disjoint data takes the max.
class ZcdpLedger {
 public:
  ZcdpLedger() = default;
  explicit ZcdpLedger(double rho);

  double rho() const { return rho_; }

  // Throws std::invalid_argument on a negative or non-finite step.
  ZcdpLedger ComposeSequential(double rho_step) const;
  ZcdpLedger ComposeParallel(const ZcdpLedger& other) const;

  double Epsilon(double delta) const { return ZcdpToApproxDp(rho_, delta); }

 private:
  double rho_ = 0.0;
};

// d i.i.d. N(0, std^2) draws. std == 0 returns zeros without touching rng.
Vector GaussianNoise(double std, std::size_t dim, Rng& rng);

}  // namespace dprelu

#endif  // DPRELU_PRIVACY_H_
