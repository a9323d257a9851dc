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

// Serial reference implementations kept as oracles for the kernels in
// kernels.hpp. They evaluate one output neuron at a time,
//   a_i = f(sum_j w_ij a_j + b_i),
// with no loop restructuring. Used by tests, selftest and the benchmark.

#include "acav/core/tensor.hpp"

namespace acav::nn::reference {

template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& bias);

template <typename T>
Tensor<T> dense_forward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& bias);

template <typename T>
Tensor<T> maxpool2x2_forward(const Tensor<T>& in);

}  // namespace acav::nn::reference
