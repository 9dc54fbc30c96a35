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

#ifndef DPRELU_RNG_H_
#define DPRELU_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>

namespace dprelu {

// Seeded, splittable random source. A substream is keyed by (seed, key) only,
// so it never depends on how many values the parent has already produced.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  Rng Substream(std::uint64_t key) const;

  double Normal() { return normal_(engine_); }
  // Uniform on [lo, hi).
  double Uniform(double lo, double hi);
  // Uniform integer on [0, n).
  std::size_t Index(std::size_t n);
  bool Coin() { return (engine_() >> 63) != 0; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// SplitMix64 finalizer; used to derive substream seeds.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t key);

}  // namespace dprelu

#endif  // DPRELU_RNG_H_
