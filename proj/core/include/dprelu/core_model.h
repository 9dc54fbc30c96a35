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

#ifndef DPRELU_CORE_MODEL_H_
#define DPRELU_CORE_MODEL_H_

#include <span>

#include "dprelu/covariance.h"
#include "dprelu/dataset.h"

namespace dprelu {

// ReLU regression primitives. The model is y = relu(<x, w*>) + z, and every
// risk carries the 1/2 factor: L(w) = 1/2 E (relu(<x, w>) - y)^2.

inline double Relu(double z) { return z > 0.0 ? z : 0.0; }

// relu(<x, w>). Throws std::invalid_argument on dimension mismatch.
double Predict(std::span<const double> w, std::span<const double> x);

// relu(<x, w>) - y.
double Residual(std::span<const double> w, const ExampleView& example);

// GLMtron pseudo-gradient x * (relu(<x, w>) - y). The ReLU derivative is
// dropped.
Vector GlmtronGradient(std::span<const double> w, const ExampleView& example);

// Gradient of the squared ReLU loss: the GLMtron direction gated by
// 1[<x, w> > 0].
Vector SgdGradient(std::span<const double> w, const ExampleView& example);

// 1/2 mean of squared residuals. Throws on an empty dataset.
double EmpiricalRisk(std::span<const double> w, DatasetView data);

// (w - w_star)^T H (w - w_star).
double ParamErrorH(std::span<const double> w, std::span<const double> w_star,
                   const CovarianceSpec& h);

}  // namespace dprelu

#endif  // DPRELU_CORE_MODEL_H_
