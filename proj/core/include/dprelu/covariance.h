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

#ifndef DPRELU_COVARIANCE_H_
#define DPRELU_COVARIANCE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "dprelu/dataset.h"

namespace dprelu {

// Data covariance H = E[x x^T]. The square root H^{1/2} and the spectrum are
// computed once at construction.
class CovarianceSpec {
 public:
  enum class Kind { kIdentity, kDiagonal, kExplicit };

  static CovarianceSpec Identity(std::size_t dim);
  // Throws std::invalid_argument if any entry is negative or non-finite.
  static CovarianceSpec Diagonal(std::vector<double> eigenvalues);
  // Row-major dim x dim symmetric PSD matrix. Throws if asymmetric or if an
  // eigenvalue is below -1e-10 * max(1, |lambda_max|).
  static CovarianceSpec Explicit(std::vector<double> matrix, std::size_t dim);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }

  double Trace() const;
  // Descending.
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  double OperatorNorm() const { return eigenvalues_.front(); }
  // lambda_max / lambda_min; +inf when singular.
  double ConditionNumber() const;

  // Entry (i, j) of H.
  double At(std::size_t i, std::size_t j) const;
  Vector Apply(std::span<const double> v) const;
  Vector ApplySqrt(std::span<const double> v) const;
  double QuadraticForm(std::span<const double> v) const;
  // ||v||_H.
  double Norm(std::span<const double> v) const;

 private:
  CovarianceSpec(Kind kind, std::size_t dim) : kind_(kind), dim_(dim) {}

  Kind kind_;
  std::size_t dim_;
  std::vector<double> diagonal_;  // kDiagonal
  std::vector<double> matrix_;    // kExplicit, row-major
  std::vector<double> sqrt_;      // kExplicit, row-major
  std::vector<double> eigenvalues_;
};

}  // namespace dprelu

#endif  // DPRELU_COVARIANCE_H_
