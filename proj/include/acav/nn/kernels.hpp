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

// Production kernels. Loops over independent outputs are OpenMP-parallel;
// every output element is accumulated in double in the same order as the
// serial versions in reference.hpp, so results are bit-identical to them and
// independent of the thread count.

#include <cstddef>
#include <span>
#include <vector>

#include "acav/core/tensor.hpp"

namespace acav::nn::kernels {

/// Valid (unpadded) stride-1 convolution. in [C,H,W], weight [O,C,KH,KW], bias [O].
template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& bias);

/// Accumulates weight/bias gradients and, when `grad_in` is non-null, the input gradient.
template <typename T>
void conv2d_backward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& grad_out,
                     Tensor<T>& grad_weight, Tensor<T>& grad_bias, Tensor<T>* grad_in);

/// out = W x + b with W [out, in].
template <typename T>
Tensor<T> dense_forward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& bias);

template <typename T>
void dense_backward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& grad_out,
                    Tensor<T>& grad_weight, Tensor<T>& grad_bias, Tensor<T>* grad_in);

template <typename T>
Tensor<T> relu_forward(const Tensor<T>& in);

template <typename T>
Tensor<T> relu_backward(const Tensor<T>& in, const Tensor<T>& grad_out);

/// 2x2 stride-2 max pool over [C,H,W]; odd trailing rows/cols are dropped.
/// `argmax` receives the flat input index chosen for each output.
template <typename T>
Tensor<T> maxpool2x2_forward(const Tensor<T>& in, std::vector<std::size_t>* argmax);

template <typename T>
Tensor<T> maxpool2x2_backward(const Shape& in_shape, const std::vector<std::size_t>& argmax,
                              const Tensor<T>& grad_out);

/// Numerically stable softmax over a flat vector.
template <typename T>
Tensor<T> softmax_forward(const Tensor<T>& in);

}  // namespace acav::nn::kernels
