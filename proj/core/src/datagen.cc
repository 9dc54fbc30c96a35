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

#include "dprelu/datagen.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "dprelu/core_model.h"
#include "dprelu/numeric.h"

namespace dprelu {

namespace {

constexpr std::uint64_t kDirectionStream = 0xd1u;
constexpr std::uint64_t kMatrixStream = 0xa1u;

Vector UnitDirection(std::size_t dim, Rng& rng) {
  Vector u(dim);
  double norm = 0.0;
  while (norm == 0.0) {
    for (double& v : u) v = rng.Normal();
    norm = Norm2(u);
  }
  for (double& v : u) v /= norm;
  return u;
}

void FillExample(const GroundTruth& gt, std::uint64_t seed, std::size_t index,
                 Dataset& out) {
  Rng rng = Rng(seed).Substream(index);
  const Vector x = SampleDesign(gt, rng);
  std::span<double> dst = out.mutable_x(index);
  std::copy(x.begin(), x.end(), dst.begin());
  out.mutable_labels()[index] = SampleLabel(gt, x, rng);
}

}  // namespace

std::string_view DesignName(Design design) {
  switch (design) {
    case Design::kGaussian:
      return "gaussian";
    case Design::kRademacher:
      return "rademacher";
    case Design::kUniformCube:
      return "uniform_cube";
  }
  return "unknown";
}

Design ParseDesign(std::string_view name) {
  if (name == "gaussian") return Design::kGaussian;
  if (name == "rademacher") return Design::kRademacher;
  if (name == "uniform_cube") return Design::kUniformCube;
  throw std::invalid_argument("unknown design: " + std::string(name));
}

CovarianceSpec GroundTruth::EffectiveCovariance() const {
  if (design == Design::kUniformCube) {
    return CovarianceSpec::Diagonal(std::vector<double>(dim(), 1.0 / 3.0));
  }
  return cov;
}

void GroundTruth::Validate() const {
  if (w_star.empty()) throw std::invalid_argument("GroundTruth: empty w_star");
  if (!std::isfinite(sigma) || sigma < 0.0) {
    throw std::invalid_argument("GroundTruth: sigma must be >= 0");
  }
  if (cov.dim() != w_star.size()) {
    throw std::invalid_argument("GroundTruth: cov dimension != w_star size");
  }
  for (double v : w_star) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("GroundTruth: non-finite w_star");
    }
  }
  if (design == Design::kUniformCube &&
      cov.kind() != CovarianceSpec::Kind::kIdentity) {
    throw std::invalid_argument(
        "GroundTruth: uniform_cube requires an identity covariance spec");
  }
}

void TailParams::Validate() const {
  if (!(c2 > 0.0) || !(a > 0.0) || !(b_x > 0.0 && b_x < 1.0)) {
    throw std::invalid_argument(
        "TailParams: need c2 > 0, a > 0 and 0 < b_x < 1");
  }
}

double DesignAlpha(Design /*design*/) { return 3.0; }

double TailRadiusSquared(double alpha, double trace_h, const TailParams& tail) {
  return alpha * trace_h * std::pow(std::log(1.0 / tail.b_x), 2.0 * tail.a);
}

Vector SampleDesign(const GroundTruth& gt, Rng& rng) {
  const std::size_t d = gt.dim();
  Vector z(d);
  switch (gt.design) {
    case Design::kGaussian:
      for (double& v : z) v = rng.Normal();
      return gt.cov.ApplySqrt(z);
    case Design::kRademacher:
      for (double& v : z) v = rng.Coin() ? 1.0 : -1.0;
      return gt.cov.ApplySqrt(z);
    case Design::kUniformCube:
      if (gt.cov.kind() != CovarianceSpec::Kind::kIdentity) {
        throw std::invalid_argument(
            "SampleDesign: uniform_cube requires an identity covariance spec");
      }
      for (double& v : z) v = rng.Uniform(-1.0, 1.0);
      return z;
  }
  return z;
}

double SampleLabel(const GroundTruth& gt, std::span<const double> x, Rng& rng) {
  const double mean = Predict(gt.w_star, x);
  if (gt.sigma == 0.0) return mean;
  return mean + gt.sigma * rng.Normal();
}

Dataset GenerateDataset(const GroundTruth& gt, std::size_t n,
                        std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("GenerateDataset: n must be >= 1");
  gt.Validate();
  Dataset out = Dataset::Zeros(gt.dim(), n);
  GenerateRange(gt, seed, 0, n, out);
  return out;
}

void GenerateRange(const GroundTruth& gt, std::uint64_t seed,
                   std::size_t begin, std::size_t end, Dataset& out) {
  if (end > out.size() || begin > end || out.dim() != gt.dim()) {
    throw std::invalid_argument("GenerateRange: bad range or dimension");
  }
  for (std::size_t i = begin; i < end; ++i) FillExample(gt, seed, i, out);
}

ModelVector SampleWStar(std::size_t dim, double norm, Rng& rng) {
  if (dim == 0) throw std::invalid_argument("SampleWStar: dim must be >= 1");
  if (!(norm > 0.0)) throw std::invalid_argument("SampleWStar: norm must be > 0");
  Vector w = UnitDirection(dim, rng);
  for (double& v : w) v *= norm;
  return w;
}

SymmetryMomentReport CheckSymmetryMoment(const GroundTruth& gt,
                                         std::size_t n_samples,
                                         std::uint64_t seed) {
  gt.Validate();
  const std::size_t d = gt.dim();
  Rng dir_rng = Rng(seed).Substream(kDirectionStream);
  SymmetryMomentReport report;
  report.direction = UnitDirection(d, dir_rng);
  report.samples = n_samples;

  std::vector<CompensatedSum> acc(d * d);
  const Dataset sample = GenerateDataset(gt, n_samples, seed);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const auto x = sample.x(k);
    if (Dot(x, report.direction) <= 0.0) continue;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) acc[i * d + j].Add(x[i] * x[j]);
    }
  }
  const CovarianceSpec h = gt.EffectiveCovariance();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double est = acc[i * d + j].Total() / static_cast<double>(n_samples);
      report.max_deviation =
          std::max(report.max_deviation, std::abs(est - 0.5 * h.At(i, j)));
    }
  }
  return report;
}

CovarianceReport CheckCovariance(const GroundTruth& gt, std::size_t n_samples,
                                 std::uint64_t seed) {
  const std::size_t d = gt.dim();
  const Dataset sample = GenerateDataset(gt, n_samples, seed);
  std::vector<CompensatedSum> acc(d * d);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const auto x = sample.x(k);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) acc[i * d + j].Add(x[i] * x[j]);
    }
  }
  const CovarianceSpec h = gt.EffectiveCovariance();
  CovarianceReport report;
  report.samples = n_samples;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double est = acc[i * d + j].Total() / static_cast<double>(n_samples);
      report.max_deviation =
          std::max(report.max_deviation, std::abs(est - h.At(i, j)));
    }
  }
  return report;
}

FourthMomentReport CheckFourthMoment(const GroundTruth& gt,
                                     std::size_t n_samples,
                                     std::uint64_t seed) {
  const std::size_t d = gt.dim();
  const CovarianceSpec h = gt.EffectiveCovariance();

  Rng mat_rng = Rng(seed).Substream(kMatrixStream);
  Eigen::MatrixXd b(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) b(i, j) = mat_rng.Normal();
  }
  Eigen::MatrixXd a = b * b.transpose();
  Eigen::MatrixXd hm(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) hm(i, j) = h.At(i, j);
  }
  a /= (hm * a).trace();

  const Dataset sample = GenerateDataset(gt, n_samples, seed);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd x(d);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const auto xs = sample.x(k);
    for (std::size_t i = 0; i < d; ++i) x(i) = xs[i];
    const double q = x.dot(a * x);
    m.noalias() += q * (x * x.transpose());
  }
  m /= static_cast<double>(n_samples);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);

  FourthMomentReport report;
  report.top_eigenvalue = solver.eigenvalues().maxCoeff();
  report.h_norm = h.OperatorNorm();
  report.samples = n_samples;
  return report;
}

TailReport CheckTail(const GroundTruth& gt, const TailParams& tail,
                     std::size_t n_samples, std::uint64_t seed) {
  tail.Validate();
  const Dataset sample = GenerateDataset(gt, n_samples, seed);
  std::vector<double> sq(n_samples);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const auto x = sample.x(k);
    sq[k] = Dot(x, x);
  }
  const auto rank = static_cast<std::size_t>(
      std::ceil((1.0 - tail.b_x) * static_cast<double>(n_samples)));
  const std::size_t idx = std::min(n_samples - 1, rank == 0 ? 0 : rank - 1);
  std::nth_element(sq.begin(), sq.begin() + static_cast<std::ptrdiff_t>(idx),
                   sq.end());

  TailReport report;
  report.quantile = sq[idx];
  report.bound = tail.c2 * gt.EffectiveCovariance().Trace() *
                 std::pow(std::log(1.0 / tail.b_x), 2.0 * tail.a);
  report.samples = n_samples;
  return report;
}

}  // namespace dprelu
