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

#ifndef DPRELU_PREPROCESS_H_
#define DPRELU_PREPROCESS_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dprelu/dataset.h"

namespace dprelu {

// Loads a comma-separated file with a header row. The target is a column
// name, or a zero-based index when the string is all digits and no column
// has that name. Every other column becomes a feature, in header order.
// Throws std::runtime_error on a missing file, a missing target, a ragged
// row, or a non-numeric cell (the message names the row and column).
Dataset LoadCsv(const std::string& path, const std::string& target);

struct TrainTestSplit {
  Dataset train;
  Dataset test;
};

// Seeded random partition with ceil(N (1 - test_fraction)) training
// examples. Throws std::invalid_argument if test_fraction is outside (0, 1)
// or either side would be empty.
TrainTestSplit Split(const Dataset& data, double test_fraction,
                     std::uint64_t seed);

struct ColumnStats {
  std::vector<double> mean;
  std::vector<double> std;  // population std; 1 for constant columns
};

// Standardizes features with statistics from `train` only, applied to both.
ColumnStats Standardize(Dataset& train, Dataset& test);

// Divides both label sets by max |y| over train and test; returns the scale.
// Throws std::invalid_argument if every label is zero.
double NormalizeTarget(Dataset& train, Dataset& test);

}  // namespace dprelu

#endif  // DPRELU_PREPROCESS_H_
