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

#include "acav/nn/gradcheck.hpp"

namespace acav::nn {

struct GradientSuiteResult {
  std::size_t models = 0;
  std::size_t failing_models = 0;
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::size_t skipped_kinks = 0;
  double max_relative_error = 0.0;
  double seconds = 0.0;
};

/// Gradient check over `models` random toy models derived from `seed`.
GradientSuiteResult gradient_suite(std::uint64_t seed, std::size_t models, const GradCheckOptions& options = {});

struct ConvOracleResult {
  std::size_t cases = 0;
  std::size_t mismatches = 0;
  double seconds = 0.0;
};

/// Compares kernels::conv2d_forward with reference::conv2d_forward bit for
/// bit on `cases` random shapes.
ConvOracleResult conv_oracle_suite(std::uint64_t seed, std::size_t cases);

}  // namespace acav::nn
