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
#include <span>
#include <vector>

#include "acav/core/tensor.hpp"
#include "acav/nn/layer.hpp"

namespace acav::nn {

template <typename T>
struct Layer {
  LayerSpec spec;
  Shape in_shape;
  Shape out_shape;
  Tensor<T> weight;  // empty for parameter-free layers
  Tensor<T> bias;
};

/// Output of one layer for one input, widened to double.
struct ActivationVector {
  std::size_t layer = 0;
  std::vector<double> values;
};

template <typename T>
struct ForwardTrace {
  std::vector<Tensor<T>> outputs;                      // outputs[i] is the output of layer i
  std::vector<std::vector<std::size_t>> pool_argmax;  // filled for maxpool layers only
  const Tensor<T>& probabilities() const { return outputs.back(); }
};

template <typename T>
struct ProbedOutput {
  Tensor<T> probabilities;
  ActivationVector activation;
};

/// One gradient tensor per parameter tensor, in parameters() order.
template <typename T>
struct Gradients {
  std::vector<Tensor<T>> tensors;
  double loss = 0.0;  // cross-entropy of the evaluated sample(s)
};

/// Ordered layer stack ending in a 2-way softmax. Parameters start at zero;
/// call initialize() for the seeded Glorot-uniform start.
template <typename T>
class BasicModel {
 public:
  BasicModel() = default;
  BasicModel(Shape input_shape, std::vector<LayerSpec> specs);

  /// Uniform in [-s, s], s = sqrt(6 / (fan_in + fan_out)); biases zero.
  void initialize(std::uint64_t seed);

  const Shape& input_shape() const noexcept { return input_shape_; }
  std::size_t layer_count() const noexcept { return layers_.size(); }
  const Layer<T>& layer(std::size_t i) const { return layers_.at(i); }
  std::vector<LayerSpec> specs() const;

  /// Layer whose output feeds the final dense layer ("layer n-1").
  std::size_t penultimate_index() const { return hidden_probe_index(1); }
  /// Layer whose output feeds the depth-th dense layer counted from the output.
  std::size_t hidden_probe_index(std::size_t depth) const;

  std::size_t parameter_count() const;
  std::vector<Tensor<T>*> parameters();
  std::vector<const Tensor<T>*> parameters() const;

  Tensor<T> forward(const Tensor<T>& input) const;
  ForwardTrace<T> forward_trace(const Tensor<T>& input) const;
  ProbedOutput<T> forward_probed(const Tensor<T>& input, std::size_t layer_index) const;

  /// Softmax cross-entropy gradients for a target distribution over the classes.
  Gradients<T> backward(const Tensor<T>& input, std::span<const double> target) const;
  Gradients<T> backward(const Tensor<T>& input, std::size_t target_class) const;

 private:
  void check_input(const Tensor<T>& input) const;

  Shape input_shape_;
  std::vector<Layer<T>> layers_;
};

using Model = BasicModel<float>;

/// Three conv blocks (3x3 kernels, 8/16/16 channels, ReLU, 2x2 max pool)
/// followed by dense 128 -> 64 -> 2 with softmax. Probe "n-1" is the
/// 64-wide ReLU output, "n-2" the 128-wide one.
Model make_classifier(std::size_t channels, std::size_t height, std::size_t width, std::uint64_t seed);

/// Mean gradient over a batch. Samples are evaluated in parallel and summed in
/// index order, so the result does not depend on the thread count.
template <typename T>
Gradients<T> batch_gradient(const BasicModel<T>& model, std::span<const Tensor<T>> inputs,
                            std::span<const std::size_t> labels);

/// Forward pass over many inputs; results are in input order.
template <typename T>
std::vector<Tensor<T>> forward_batch(const BasicModel<T>& model, std::span<const Tensor<T>> inputs);

}  // namespace acav::nn
