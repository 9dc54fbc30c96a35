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

#include "dprelu/core_model.h"

#include <stdexcept>
#include <string>

#include "dprelu/numeric.h"

namespace dprelu {

namespace {

void CheckSameDim(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

}  // namespace

double Predict(std::span<const double> w, std::span<const double> x) {
  CheckSameDim(w.size(), x.size(), "Predict");
  return Relu(Dot(x, w));
}

double Residual(std::span<const double> w, const ExampleView& example) {
  return Predict(w, example.x) - example.y;
}

Vector GlmtronGradient(std::span<const double> w, const ExampleView& example) {
  const double r = Residual(w, example);
  Vector g(example.x.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = example.x[i] * r;
  return g;
}

Vector SgdGradient(std::span<const double> w, const ExampleView& example) {
  CheckSameDim(w.size(), example.x.size(), "SgdGradient");
  const double z = Dot(example.x, w);
  Vector g(example.x.size(), 0.0);
  if (z > 0.0) {
    const double r = z - example.y;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = example.x[i] * r;
  }
  return g;
}

double EmpiricalRisk(std::span<const double> w, DatasetView data) {
  if (data.empty()) throw std::invalid_argument("EmpiricalRisk: empty dataset");
  CheckSameDim(w.size(), data.dim(), "EmpiricalRisk");
  CompensatedSum sum;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double r = Residual(w, data[i]);
    sum.Add(r * r);
  }
  return 0.5 * sum.Total() / static_cast<double>(data.size());
}

double ParamErrorH(std::span<const double> w, std::span<const double> w_star,
                   const CovarianceSpec& h) {
  CheckSameDim(w.size(), w_star.size(), "ParamErrorH");
  CheckSameDim(w.size(), h.dim(), "ParamErrorH");
  Vector diff(w.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = w[i] - w_star[i];
  return h.QuadraticForm(diff);
}

}  // namespace dprelu
