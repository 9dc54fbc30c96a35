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

#include "dprelu/dataset.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dprelu {

Dataset::Dataset(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("Dataset: dimension must be >= 1");
}

Dataset Dataset::Zeros(std::size_t dim, std::size_t n) {
  Dataset out(dim);
  out.features_.assign(n * dim, 0.0);
  out.labels_.assign(n, 0.0);
  return out;
}

void Dataset::Add(std::span<const double> x, double y) {
  if (x.size() != dim_) {
    throw std::invalid_argument("Dataset::Add: expected dimension " +
                                std::to_string(dim_) + ", got " +
                                std::to_string(x.size()));
  }
  if (!std::isfinite(y)) {
    throw std::invalid_argument("Dataset::Add: non-finite label");
  }
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("Dataset::Add: non-finite feature");
    }
  }
  features_.insert(features_.end(), x.begin(), x.end());
  labels_.push_back(y);
}

void Dataset::Reserve(std::size_t n) {
  features_.reserve(n * dim_);
  labels_.reserve(n);
}

Dataset Dataset::Select(std::span<const std::size_t> indices) const {
  Dataset out(dim_);
  out.Reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) throw std::out_of_range("Dataset::Select: bad index");
    out.features_.insert(out.features_.end(), features_.begin() + i * dim_,
                         features_.begin() + (i + 1) * dim_);
    out.labels_.push_back(labels_[i]);
  }
  return out;
}

Dataset Dataset::Slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > size()) {
    throw std::out_of_range("Dataset::Slice: bad range");
  }
  Dataset out(dim_);
  out.features_.assign(features_.begin() + begin * dim_,
                       features_.begin() + end * dim_);
  out.labels_.assign(labels_.begin() + begin, labels_.begin() + end);
  return out;
}

DatasetView::DatasetView(const Dataset& data, std::size_t begin,
                         std::size_t count)
    : data_(&data), begin_(begin), count_(count) {
  if (begin + count > data.size()) {
    throw std::out_of_range("DatasetView: range exceeds dataset");
  }
}

}  // namespace dprelu
