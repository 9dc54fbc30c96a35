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

#ifndef DPRELU_DATASET_H_
#define DPRELU_DATASET_H_

#include <cstddef>
#include <span>
#include <vector>

namespace dprelu {

// Dense real vector. Used for features, gradients and model parameters.
using Vector = std::vector<double>;

// A parameter point w in R^d.
using ModelVector = Vector;

// One owned (x, y) pair.
struct LabeledExample {
  Vector x;
  double y = 0.0;
};

// Non-owning view of one example stored inside a Dataset.
struct ExampleView {
  std::span<const double> x;
  double y = 0.0;
};

// Ordered collection of examples of a common dimension. Features are stored
// row-major in one contiguous buffer. Order is significant: the one-pass
// trainers consume examples in sequence.
class Dataset {
 public:
  explicit Dataset(std::size_t dim);
  // n all-zero examples, to be filled in place.
  static Dataset Zeros(std::size_t dim, std::size_t n);

  // Throws std::invalid_argument on dimension mismatch or non-finite values.
  void Add(std::span<const double> x, double y);
  void Add(const LabeledExample& example) { Add(example.x, example.y); }
  void Reserve(std::size_t n);

  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return dim_; }
  bool empty() const { return labels_.empty(); }

  ExampleView operator[](std::size_t i) const {
    return {std::span<const double>(features_.data() + i * dim_, dim_),
            labels_[i]};
  }
  std::span<const double> x(std::size_t i) const {
    return {features_.data() + i * dim_, dim_};
  }
  double y(std::size_t i) const { return labels_[i]; }

  std::span<const double> labels() const { return labels_; }
  std::span<double> mutable_labels() { return labels_; }
  std::span<double> mutable_x(std::size_t i) {
    return {features_.data() + i * dim_, dim_};
  }

  // New dataset holding the examples at `indices`, in that order.
  Dataset Select(std::span<const std::size_t> indices) const;
  // Examples [begin, end).
  Dataset Slice(std::size_t begin, std::size_t end) const;

  friend bool operator==(const Dataset& a, const Dataset& b) = default;

 private:
  std::size_t dim_;
  std::vector<double> features_;
  std::vector<double> labels_;
};

// Contiguous range of a Dataset. Implicitly constructible from a whole
// Dataset so functions can accept either.
class DatasetView {
 public:
  DatasetView(const Dataset& data)  // NOLINT(google-explicit-constructor)
      : data_(&data), begin_(0), count_(data.size()) {}
  DatasetView(const Dataset& data, std::size_t begin, std::size_t count);

  std::size_t size() const { return count_; }
  std::size_t dim() const { return data_->dim(); }
  bool empty() const { return count_ == 0; }
  ExampleView operator[](std::size_t i) const { return (*data_)[begin_ + i]; }

 private:
  const Dataset* data_;
  std::size_t begin_;
  std::size_t count_;
};

}  // namespace dprelu

#endif  // DPRELU_DATASET_H_
