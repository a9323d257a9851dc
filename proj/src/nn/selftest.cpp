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

#include "acav/nn/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>

#include "acav/core/rng.hpp"
#include "acav/nn/kernels.hpp"
#include "acav/nn/reference.hpp"

namespace acav::nn {
namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Tensor<float> random_tensor(const Shape& shape, Rng& rng) {
  Tensor<float> t(shape);
  for (auto& v : t.values()) v = static_cast<float>(rng.normal());
  return t;
}

}  // namespace

GradientSuiteResult gradient_suite(std::uint64_t seed, std::size_t models, const GradCheckOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  GradientSuiteResult out;
  for (std::size_t i = 0; i < models; ++i) {
    const auto model = random_toy_model(derive_seed(seed, {i, 0}));
    const auto input = random_input(model, derive_seed(seed, {i, 1}));
    const std::size_t target = i % 2;
    const auto r = check_gradients(model, input, target, options);
    ++out.models;
    out.checked += r.checked;
    out.failures += r.failures;
    out.skipped_kinks += r.skipped_kinks;
    if (r.failures > 0) ++out.failing_models;
    out.max_relative_error = std::max(out.max_relative_error, r.max_relative_error);
  }
  out.seconds = seconds_since(start);
  return out;
}

ConvOracleResult conv_oracle_suite(std::uint64_t seed, std::size_t cases) {
  const auto start = std::chrono::steady_clock::now();
  ConvOracleResult out;
  for (std::size_t i = 0; i < cases; ++i) {
    Rng rng(derive_seed(seed, {i}));
    const std::size_t c = 1 + rng.below(4);
    const std::size_t h = 3 + rng.below(30);
    const std::size_t w = 3 + rng.below(30);
    const std::size_t o = 1 + rng.below(8);
    const std::size_t kh = 1 + rng.below(std::min<std::size_t>(5, h));
    const std::size_t kw = 1 + rng.below(std::min<std::size_t>(5, w));
    const auto in = random_tensor({c, h, w}, rng);
    const auto weight = random_tensor({o, c, kh, kw}, rng);
    const auto bias = random_tensor({o}, rng);
    const auto fast = kernels::conv2d_forward(in, weight, bias);
    const auto slow = reference::conv2d_forward(in, weight, bias);
    ++out.cases;
    if (fast.shape() != slow.shape() ||
        std::memcmp(fast.data(), slow.data(), fast.size() * sizeof(float)) != 0) {
      ++out.mismatches;
    }
  }
  out.seconds = seconds_since(start);
  return out;
}

}  // namespace acav::nn
