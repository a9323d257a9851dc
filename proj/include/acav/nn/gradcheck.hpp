// Copyright 2026 The ACAV Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>

#include "acav/nn/model.hpp"

namespace acav::nn {

struct GradCheckOptions {
  double step = 1e-4;
  double tolerance = 1e-3;
  /// Denominator floor of the relative error; below it the check is absolute.
  double floor = 1e-6;
};

struct GradCheckResult {
  std::size_t checked = 0;
  std::size_t failures = 0;
  /// Parameters whose +-step stencil crosses a ReLU or max-pool switch; the
  /// loss is not differentiable across that interval, so they are not scored.
  std::size_t skipped_kinks = 0;
  double max_relative_error = 0.0;
};

/// Compares backward() against central finite differences of the loss, computed
/// from forward passes only.
GradCheckResult check_gradients(const BasicModel<double>& model, const Tensor<double>& input,
                                std::size_t target_class, const GradCheckOptions& options = {});

/// Small random conv/dense stack with at most `max_params` parameters and at
/// most three parameterized layers, Glorot-initialized. Biases get small
/// random values too so they are exercised.
BasicModel<double> random_toy_model(std::uint64_t seed, std::size_t max_params = 500);

/// Uniform [0,1) input for `model`.
Tensor<double> random_input(const BasicModel<double>& model, std::uint64_t seed);

}  // namespace acav::nn
