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

#include "acav/nn/model.hpp"

#include <cmath>
#include <exception>
#include <limits>

#include "acav/core/error.hpp"
#include "acav/core/rng.hpp"
#include "acav/nn/kernels.hpp"

namespace acav::nn {

std::string to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::conv2d: return "conv2d";
    case LayerKind::relu: return "relu";
    case LayerKind::maxpool2x2: return "maxpool2x2";
    case LayerKind::flatten: return "flatten";
    case LayerKind::dense: return "dense";
    case LayerKind::softmax: return "softmax";
  }
  return "unknown";
}

Shape infer_output_shape(const LayerSpec& spec, const Shape& in) {
  const std::string where = to_string(spec.kind) + " on input " + shape_string(in);
  switch (spec.kind) {
    case LayerKind::conv2d:
      if (in.size() != 3 || in[0] != spec.in_channels || spec.kernel_h == 0 || spec.kernel_w == 0 ||
          spec.out_channels == 0 || spec.kernel_h > in[1] || spec.kernel_w > in[2]) {
        throw ShapeError("incompatible " + where);
      }
      return {spec.out_channels, in[1] - spec.kernel_h + 1, in[2] - spec.kernel_w + 1};
    case LayerKind::maxpool2x2:
      if (in.size() != 3 || in[1] < 2 || in[2] < 2) throw ShapeError("incompatible " + where);
      return {in[0], in[1] / 2, in[2] / 2};
    case LayerKind::relu:
      return in;
    case LayerKind::flatten:
      return {shape_volume(in)};
    case LayerKind::dense:
      if (in.size() != 1 || in[0] != spec.in_channels || spec.out_channels == 0) {
        throw ShapeError("incompatible " + where);
      }
      return {spec.out_channels};
    case LayerKind::softmax:
      if (in.size() != 1) throw ShapeError("incompatible " + where);
      return in;
  }
  throw ShapeError("unknown layer kind");
}

template <typename T>
BasicModel<T>::BasicModel(Shape input_shape, std::vector<LayerSpec> specs)
    : input_shape_(std::move(input_shape)) {
  if (specs.empty()) throw ShapeError("model has no layers");
  Shape shape = input_shape_;
  for (LayerSpec spec : specs) {
    if (spec.kind == LayerKind::dense && spec.in_channels == 0 && shape.size() == 1) {
      spec.in_channels = shape[0];
    }
    Layer<T> layer;
    layer.spec = spec;
    layer.in_shape = shape;
    layer.out_shape = infer_output_shape(spec, shape);
    if (spec.kind == LayerKind::conv2d) {
      layer.weight = Tensor<T>({spec.out_channels, spec.in_channels, spec.kernel_h, spec.kernel_w});
      layer.bias = Tensor<T>({spec.out_channels});
    } else if (spec.kind == LayerKind::dense) {
      layer.weight = Tensor<T>({spec.out_channels, spec.in_channels});
      layer.bias = Tensor<T>({spec.out_channels});
    }
    shape = layer.out_shape;
    layers_.push_back(std::move(layer));
  }
  if (layers_.back().spec.kind != LayerKind::softmax || shape != Shape{2}) {
    throw ShapeError("model must end in a softmax over 2 classes, got " + to_string(layers_.back().spec.kind) +
                     " with output " + shape_string(shape));
  }
}

template <typename T>
void BasicModel<T>::initialize(std::uint64_t seed) {
  Rng rng(seed);
  for (auto& layer : layers_) {
    if (!layer.spec.has_parameters()) continue;
    double fan_in = 0, fan_out = 0;
    if (layer.spec.kind == LayerKind::conv2d) {
      const double k = static_cast<double>(layer.spec.kernel_h * layer.spec.kernel_w);
      fan_in = static_cast<double>(layer.spec.in_channels) * k;
      fan_out = static_cast<double>(layer.spec.out_channels) * k;
    } else {
      fan_in = static_cast<double>(layer.spec.in_channels);
      fan_out = static_cast<double>(layer.spec.out_channels);
    }
    const double s = std::sqrt(6.0 / (fan_in + fan_out));
    for (T& w : layer.weight.values()) w = static_cast<T>(rng.uniform(-s, s));
    layer.bias.fill(T{0});
  }
}

template <typename T>
std::vector<LayerSpec> BasicModel<T>::specs() const {
  std::vector<LayerSpec> out;
  for (const auto& l : layers_) out.push_back(l.spec);
  return out;
}

template <typename T>
std::size_t BasicModel<T>::hidden_probe_index(std::size_t depth) const {
  std::vector<std::size_t> dense;
  for (std::size_t i = 0; i < layers_.size(); ++i)
    if (layers_[i].spec.kind == LayerKind::dense) dense.push_back(i);
  if (depth == 0 || depth > dense.size() || dense[dense.size() - depth] == 0) {
    throw ProbeError("model has no probe point n-" + std::to_string(depth));
  }
  return dense[dense.size() - depth] - 1;
}

template <typename T>
std::size_t BasicModel<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto* p : parameters()) n += p->size();
  return n;
}

template <typename T>
std::vector<Tensor<T>*> BasicModel<T>::parameters() {
  std::vector<Tensor<T>*> out;
  for (auto& l : layers_) {
    if (!l.spec.has_parameters()) continue;
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
  return out;
}

template <typename T>
std::vector<const Tensor<T>*> BasicModel<T>::parameters() const {
  std::vector<const Tensor<T>*> out;
  for (const auto& l : layers_) {
    if (!l.spec.has_parameters()) continue;
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
  return out;
}

template <typename T>
void BasicModel<T>::check_input(const Tensor<T>& input) const {
  if (input.shape() != input_shape_) {
    throw ShapeError("input shape " + shape_string(input.shape()) + " does not match model input " +
                     shape_string(input_shape_));
  }
}

namespace {

template <typename T>
Tensor<T> apply_layer(const Layer<T>& layer, const Tensor<T>& x, std::vector<std::size_t>* argmax) {
  switch (layer.spec.kind) {
    case LayerKind::conv2d: return kernels::conv2d_forward(x, layer.weight, layer.bias);
    case LayerKind::relu: return kernels::relu_forward(x);
    case LayerKind::maxpool2x2: return kernels::maxpool2x2_forward(x, argmax);
    case LayerKind::flatten: return x.reshaped(layer.out_shape);
    case LayerKind::dense: return kernels::dense_forward(x, layer.weight, layer.bias);
    case LayerKind::softmax: return kernels::softmax_forward(x);
  }
  throw ShapeError("unknown layer kind");
}

}  // namespace

template <typename T>
Tensor<T> BasicModel<T>::forward(const Tensor<T>& input) const {
  check_input(input);
  Tensor<T> x = input;
  for (const auto& layer : layers_) x = apply_layer(layer, x, nullptr);
  return x;
}

template <typename T>
ForwardTrace<T> BasicModel<T>::forward_trace(const Tensor<T>& input) const {
  check_input(input);
  ForwardTrace<T> trace;
  trace.outputs.reserve(layers_.size());
  trace.pool_argmax.resize(layers_.size());
  const Tensor<T>* x = &input;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    auto* argmax = layers_[i].spec.kind == LayerKind::maxpool2x2 ? &trace.pool_argmax[i] : nullptr;
    trace.outputs.push_back(apply_layer(layers_[i], *x, argmax));
    x = &trace.outputs.back();
  }
  return trace;
}

template <typename T>
ProbedOutput<T> BasicModel<T>::forward_probed(const Tensor<T>& input, std::size_t layer_index) const {
  if (layer_index >= layers_.size()) {
    throw ProbeError("probe layer " + std::to_string(layer_index) + " out of range (model has " +
                     std::to_string(layers_.size()) + " layers)");
  }
  check_input(input);
  ProbedOutput<T> out;
  Tensor<T> x = input;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    x = apply_layer(layers_[i], x, nullptr);
    if (i == layer_index) {
      out.activation.layer = i;
      out.activation.values.assign(x.values().begin(), x.values().end());
    }
  }
  out.probabilities = std::move(x);
  return out;
}

template <typename T>
Gradients<T> BasicModel<T>::backward(const Tensor<T>& input, std::span<const double> target) const {
  const ForwardTrace<T> trace = forward_trace(input);
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (!trace.outputs[i].all_finite()) {
      throw NumericError("non-finite activations in layer " + std::to_string(i) + " (" +
                         to_string(layers_[i].spec.kind) + ")");
    }
  }
  const std::size_t last = layers_.size() - 1;
  const Tensor<T>& logits = last == 0 ? input : trace.outputs[last - 1];
  const Tensor<T>& probs = trace.outputs[last];
  if (target.size() != probs.size()) {
    throw ShapeError("target has " + std::to_string(target.size()) + " entries, model outputs " +
                     std::to_string(probs.size()));
  }

  // Loss from the logits through log-sum-exp so it stays finite when a
  // probability underflows.
  double peak = -std::numeric_limits<double>::infinity();
  for (T z : logits.values()) peak = std::max(peak, static_cast<double>(z));
  double sum = 0.0;
  for (T z : logits.values()) sum += std::exp(static_cast<double>(z) - peak);
  const double log_norm = peak + std::log(sum);
  Gradients<T> grads;
  for (std::size_t k = 0; k < target.size(); ++k) {
    if (target[k] != 0.0) grads.loss -= target[k] * (static_cast<double>(logits[k]) - log_norm);
  }
  if (!std::isfinite(grads.loss)) {
    throw NumericError("non-finite loss at layer " + std::to_string(last) + " (softmax)");
  }

  // Softmax + cross-entropy: d loss / d logits = p - y.
  Tensor<T> grad(probs.shape());
  for (std::size_t k = 0; k < probs.size(); ++k)
    grad[k] = static_cast<T>(static_cast<double>(probs[k]) - target[k]);

  std::vector<std::size_t> param_slot(layers_.size(), 0);
  std::size_t n_params = 0;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (layers_[i].spec.has_parameters()) {
      param_slot[i] = n_params;
      n_params += 2;
    }
  }
  grads.tensors.resize(n_params);

  for (std::size_t ii = last; ii-- > 0;) {
    const Layer<T>& layer = layers_[ii];
    const Tensor<T>& x = ii == 0 ? input : trace.outputs[ii - 1];
    const bool need_input_grad = ii > 0;
    Tensor<T> grad_in;
    switch (layer.spec.kind) {
      case LayerKind::conv2d:
      case LayerKind::dense: {
        Tensor<T> gw(layer.weight.shape());
        Tensor<T> gb(layer.bias.shape());
        if (need_input_grad) grad_in = Tensor<T>(x.shape());
        if (layer.spec.kind == LayerKind::conv2d) {
          kernels::conv2d_backward(x, layer.weight, grad, gw, gb, need_input_grad ? &grad_in : nullptr);
        } else {
          kernels::dense_backward(x, layer.weight, grad, gw, gb, need_input_grad ? &grad_in : nullptr);
        }
        grads.tensors[param_slot[ii]] = std::move(gw);
        grads.tensors[param_slot[ii] + 1] = std::move(gb);
        break;
      }
      case LayerKind::relu:
        grad_in = kernels::relu_backward(x, grad);
        break;
      case LayerKind::maxpool2x2:
        grad_in = kernels::maxpool2x2_backward(x.shape(), trace.pool_argmax[ii], grad);
        break;
      case LayerKind::flatten:
        grad_in = grad.reshaped(x.shape());
        break;
      case LayerKind::softmax:
        throw ShapeError("softmax is only supported as the final layer");
    }
    if (!need_input_grad) break;
    if (!grad_in.all_finite()) {
      throw NumericError("non-finite gradient in layer " + std::to_string(ii) + " (" +
                         to_string(layer.spec.kind) + ")");
    }
    grad = std::move(grad_in);
  }
  return grads;
}

template <typename T>
Gradients<T> BasicModel<T>::backward(const Tensor<T>& input, std::size_t target_class) const {
  const std::size_t classes = layers_.back().out_shape[0];
  if (target_class >= classes) {
    throw ShapeError("target class " + std::to_string(target_class) + " out of range");
  }
  std::vector<double> target(classes, 0.0);
  target[target_class] = 1.0;
  return backward(input, target);
}

Model make_classifier(std::size_t channels, std::size_t height, std::size_t width, std::uint64_t seed) {
  Model model({channels, height, width},
              {
                  LayerSpec::conv2d(channels, 8, 3, 3), LayerSpec::relu(), LayerSpec::maxpool2x2(),
                  LayerSpec::conv2d(8, 16, 3, 3), LayerSpec::relu(), LayerSpec::maxpool2x2(),
                  LayerSpec::conv2d(16, 16, 3, 3), LayerSpec::relu(), LayerSpec::maxpool2x2(),
                  LayerSpec::flatten(),
                  LayerSpec::dense(0, 128), LayerSpec::relu(),
                  LayerSpec::dense(128, 64), LayerSpec::relu(),
                  LayerSpec::dense(64, 2), LayerSpec::softmax(),
              });
  model.initialize(seed);
  return model;
}

template <typename T>
Gradients<T> batch_gradient(const BasicModel<T>& model, std::span<const Tensor<T>> inputs,
                            std::span<const std::size_t> labels) {
  if (inputs.empty() || inputs.size() != labels.size()) {
    throw ShapeError("batch_gradient: need a non-empty batch with one label per input");
  }
  const std::size_t n = inputs.size();
  std::vector<Gradients<T>> per_sample(n);
  std::vector<std::exception_ptr> failures(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
    try {
      per_sample[static_cast<std::size_t>(k)] =
          model.backward(inputs[static_cast<std::size_t>(k)], labels[static_cast<std::size_t>(k)]);
    } catch (...) {
      failures[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  Gradients<T> mean;
  const std::size_t n_tensors = per_sample.front().tensors.size();
  mean.tensors.reserve(n_tensors);
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t t = 0; t < n_tensors; ++t) {
    Tensor<T> acc(per_sample.front().tensors[t].shape());
    for (std::size_t e = 0; e < acc.size(); ++e) {
      double s = static_cast<double>(per_sample[0].tensors[t][e]);
      for (std::size_t k = 1; k < n; ++k) s += static_cast<double>(per_sample[k].tensors[t][e]);
      acc[e] = static_cast<T>(s * inv);
    }
    mean.tensors.push_back(std::move(acc));
  }
  double loss = 0.0;
  for (const auto& g : per_sample) loss += g.loss;
  mean.loss = loss * inv;
  return mean;
}

template <typename T>
std::vector<Tensor<T>> forward_batch(const BasicModel<T>& model, std::span<const Tensor<T>> inputs) {
  std::vector<Tensor<T>> out(inputs.size());
  std::vector<std::exception_ptr> failures(inputs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(inputs.size()); ++k) {
    try {
      out[static_cast<std::size_t>(k)] = model.forward(inputs[static_cast<std::size_t>(k)]);
    } catch (...) {
      failures[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return out;
}

template class BasicModel<float>;
template class BasicModel<double>;
template Gradients<float> batch_gradient(const BasicModel<float>&, std::span<const Tensor<float>>,
                                         std::span<const std::size_t>);
template Gradients<double> batch_gradient(const BasicModel<double>&, std::span<const Tensor<double>>,
                                          std::span<const std::size_t>);
template std::vector<Tensor<float>> forward_batch(const BasicModel<float>&, std::span<const Tensor<float>>);
template std::vector<Tensor<double>> forward_batch(const BasicModel<double>&, std::span<const Tensor<double>>);

}  // namespace acav::nn
