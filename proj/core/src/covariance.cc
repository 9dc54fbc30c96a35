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

#include "dprelu/covariance.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace dprelu {

namespace {

void CheckDim(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw std::invalid_argument("CovarianceSpec: dimension mismatch");
  }
}

}  // namespace

CovarianceSpec CovarianceSpec::Identity(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("CovarianceSpec: dim must be >= 1");
  CovarianceSpec spec(Kind::kIdentity, dim);
  spec.eigenvalues_.assign(dim, 1.0);
  return spec;
}

CovarianceSpec CovarianceSpec::Diagonal(std::vector<double> eigenvalues) {
  if (eigenvalues.empty()) {
    throw std::invalid_argument("CovarianceSpec: dim must be >= 1");
  }
  for (double v : eigenvalues) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument(
          "CovarianceSpec: diagonal entries must be finite and >= 0");
    }
  }
  CovarianceSpec spec(Kind::kDiagonal, eigenvalues.size());
  spec.eigenvalues_ = eigenvalues;
  std::sort(spec.eigenvalues_.begin(), spec.eigenvalues_.end(),
            std::greater<>());
  spec.diagonal_ = std::move(eigenvalues);
  return spec;
}

CovarianceSpec CovarianceSpec::Explicit(std::vector<double> matrix,
                                        std::size_t dim) {
  if (dim == 0 || matrix.size() != dim * dim) {
    throw std::invalid_argument("CovarianceSpec: matrix must be dim x dim");
  }
  Eigen::MatrixXd h(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double v = matrix[i * dim + j];
      if (!std::isfinite(v)) {
        throw std::invalid_argument("CovarianceSpec: non-finite entry");
      }
      h(i, j) = v;
    }
  }
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("CovarianceSpec: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  Eigen::VectorXd lambda = solver.eigenvalues();
  if (lambda.minCoeff() < -1e-10 * std::max(1.0, std::abs(lambda.maxCoeff()))) {
    throw std::invalid_argument("CovarianceSpec: matrix is not PSD");
  }
  lambda = lambda.cwiseMax(0.0);
  const Eigen::MatrixXd& q = solver.eigenvectors();
  const Eigen::MatrixXd root =
      q * lambda.cwiseSqrt().asDiagonal() * q.transpose();

  CovarianceSpec spec(Kind::kExplicit, dim);
  spec.matrix_ = std::move(matrix);
  spec.sqrt_.resize(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) spec.sqrt_[i * dim + j] = root(i, j);
  }
  spec.eigenvalues_.assign(lambda.data(), lambda.data() + dim);
  std::sort(spec.eigenvalues_.begin(), spec.eigenvalues_.end(),
            std::greater<>());
  return spec;
}

double CovarianceSpec::Trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += At(i, i);
  return t;
}

double CovarianceSpec::ConditionNumber() const {
  const double lo = eigenvalues_.back();
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return eigenvalues_.front() / lo;
}

double CovarianceSpec::At(std::size_t i, std::size_t j) const {
  switch (kind_) {
    case Kind::kIdentity:
      return i == j ? 1.0 : 0.0;
    case Kind::kDiagonal:
      return i == j ? diagonal_[i] : 0.0;
    case Kind::kExplicit:
      return matrix_[i * dim_ + j];
  }
  return 0.0;
}

Vector CovarianceSpec::Apply(std::span<const double> v) const {
  CheckDim(dim_, v.size());
  Vector out(dim_, 0.0);
  switch (kind_) {
    case Kind::kIdentity:
      out.assign(v.begin(), v.end());
      break;
    case Kind::kDiagonal:
      for (std::size_t i = 0; i < dim_; ++i) out[i] = diagonal_[i] * v[i];
      break;
    case Kind::kExplicit:
      for (std::size_t i = 0; i < dim_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) acc += matrix_[i * dim_ + j] * v[j];
        out[i] = acc;
      }
      break;
  }
  return out;
}

Vector CovarianceSpec::ApplySqrt(std::span<const double> v) const {
  CheckDim(dim_, v.size());
  Vector out(dim_, 0.0);
  switch (kind_) {
    case Kind::kIdentity:
      out.assign(v.begin(), v.end());
      break;
    case Kind::kDiagonal:
      for (std::size_t i = 0; i < dim_; ++i) {
        out[i] = std::sqrt(diagonal_[i]) * v[i];
      }
      break;
    case Kind::kExplicit:
      for (std::size_t i = 0; i < dim_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) acc += sqrt_[i * dim_ + j] * v[j];
        out[i] = acc;
      }
      break;
  }
  return out;
}

double CovarianceSpec::QuadraticForm(std::span<const double> v) const {
  const Vector hv = Apply(v);
  double acc = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) acc += v[i] * hv[i];
  return acc;
}

double CovarianceSpec::Norm(std::span<const double> v) const {
  return std::sqrt(std::max(0.0, QuadraticForm(v)));
}

}  // namespace dprelu
