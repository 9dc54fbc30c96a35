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

#ifndef DPRELU_NUMERIC_H_
#define DPRELU_NUMERIC_H_

#include <cmath>
#include <cstddef>
#include <span>

namespace dprelu {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void Add(double value) {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }
  double Total() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// Streaming mean and variance (Welford) with a compensated mean for the
// final estimate.
class RunningStats {
 public:
  void Add(double value) {
    ++count_;
    sum_.Add(value);
    const double delta = value - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (value - mean_);
  }
  std::size_t count() const { return count_; }
  double Mean() const {
    return count_ == 0 ? 0.0 : sum_.Total() / static_cast<double>(count_);
  }
  // Sample variance (n - 1 denominator); zero for fewer than two values.
  double Variance() const {
    return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
  }
  double StandardError() const {
    return count_ == 0 ? 0.0
                       : std::sqrt(Variance() / static_cast<double>(count_));
  }

 private:
  std::size_t count_ = 0;
  CompensatedSum sum_;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

inline double Dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double Norm2(std::span<const double> v) { return std::sqrt(Dot(v, v)); }

}  // namespace dprelu

#endif  // DPRELU_NUMERIC_H_
