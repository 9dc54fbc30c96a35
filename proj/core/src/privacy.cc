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

#include "dprelu/privacy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dprelu {

namespace {

void CheckEpsilonDelta(double epsilon, double delta, const char* where) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument(std::string(where) + ": epsilon must be > 0");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument(std::string(where) +
                                ": delta must lie in (0, 1)");
  }
}

}  // namespace

std::string_view RegimeName(PrivacyRegime regime) {
  switch (regime) {
    case PrivacyRegime::kShuffleAmplified:
      return "shuffle_amplified";
    case PrivacyRegime::kZcdp:
      return "zcdp";
  }
  return "unknown";
}

void PrivacyParams::Validate() const {
  if (noise_multiplier == 0.0) return;  // noise off
  CheckEpsilonDelta(epsilon, delta, "PrivacyParams");
  if (!(noise_multiplier > 0.0) || !std::isfinite(noise_multiplier)) {
    throw std::invalid_argument("PrivacyParams: noise multiplier must be > 0");
  }
  if (regime == PrivacyRegime::kZcdp) {
    const double f = noise_multiplier;
    const double spent = ZcdpToApproxDp(1.0 / (f * f), delta);
    // Relative slack for rounding in the closed forms.
    if (spent > epsilon * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "PrivacyParams: noise multiplier " << f << " only achieves epsilon "
          << spent << " > " << epsilon;
      throw std::invalid_argument(msg.str());
    }
  }
}

PrivacyParams PrivacyParams::Zcdp(double epsilon, double delta) {
  PrivacyParams p;
  p.epsilon = epsilon;
  p.delta = delta;
  p.noise_multiplier = CalibrateZcdpMultiplier(epsilon, delta);
  p.regime = PrivacyRegime::kZcdp;
  return p;
}

PrivacyParams PrivacyParams::Shuffle(double epsilon, double delta,
                                     std::size_t n, double c3) {
  const ShuffleCalibration cal =
      CalibrateShuffleMultiplier(epsilon, delta, n, c3);
  PrivacyParams p;
  p.epsilon = epsilon;
  p.delta = delta;
  p.noise_multiplier = cal.noise_multiplier;
  p.regime = PrivacyRegime::kShuffleAmplified;
  if (!cal.within_regime) {
    std::ostringstream msg;
    msg << "epsilon " << epsilon << " exceeds the shuffling regime bound "
        << cal.epsilon_bound << "; the stated (epsilon, delta) is not covered";
    p.warning = msg.str();
  }
  return p;
}

PrivacyParams PrivacyParams::NoiseOff(PrivacyRegime regime) {
  PrivacyParams p;
  p.epsilon = std::numeric_limits<double>::infinity();
  p.delta = 0.0;
  p.noise_multiplier = 0.0;
  p.regime = regime;
  return p;
}

double CalibrateZcdpMultiplier(double epsilon, double delta) {
  CheckEpsilonDelta(epsilon, delta, "CalibrateZcdpMultiplier");
  const double log_inv_delta = std::log(1.0 / delta);
  if (epsilon <= log_inv_delta) {
    return std::sqrt(8.0 * log_inv_delta) / epsilon;
  }
  return 2.0 * std::sqrt(log_inv_delta + epsilon) / epsilon;
}

ShuffleCalibration CalibrateShuffleMultiplier(double epsilon, double delta,
                                              std::size_t n, double c3) {
  CheckEpsilonDelta(epsilon, delta, "CalibrateShuffleMultiplier");
  if (n == 0) throw std::invalid_argument("CalibrateShuffleMultiplier: n == 0");
  if (!(c3 > 0.0)) {
    throw std::invalid_argument("CalibrateShuffleMultiplier: c3 must be > 0");
  }
  const double nd = static_cast<double>(n);
  const double log_term = std::log(nd / delta);
  ShuffleCalibration cal;
  cal.noise_multiplier = c3 * log_term / (epsilon * std::sqrt(nd));
  cal.epsilon_bound = std::sqrt(log_term / nd);
  cal.within_regime = epsilon <= cal.epsilon_bound;
  return cal;
}

double ZcdpToApproxDp(double rho, double delta) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw std::invalid_argument("ZcdpToApproxDp: rho must be >= 0");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("ZcdpToApproxDp: delta must lie in (0, 1)");
  }
  return rho + 2.0 * std::sqrt(rho * std::log(1.0 / delta));
}

ZcdpLedger::ZcdpLedger(double rho) : rho_(rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw std::invalid_argument("ZcdpLedger: rho must be >= 0");
  }
}

ZcdpLedger ZcdpLedger::ComposeSequential(double rho_step) const {
  if (!(rho_step >= 0.0) || !std::isfinite(rho_step)) {
    throw std::invalid_argument("ZcdpLedger: step cost must be >= 0");
  }
  return ZcdpLedger(rho_ + rho_step);
}

ZcdpLedger ZcdpLedger::ComposeParallel(const ZcdpLedger& other) const {
  return ZcdpLedger(std::max(rho_, other.rho_));
}

Vector GaussianNoise(double std, std::size_t dim, Rng& rng) {
  if (!(std >= 0.0)) throw std::invalid_argument("GaussianNoise: std < 0");
  Vector out(dim, 0.0);
  if (std == 0.0) return out;
  for (double& v : out) v = std * rng.Normal();
  return out;
}

}  // namespace dprelu
