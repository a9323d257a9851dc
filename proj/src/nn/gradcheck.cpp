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

#include "acav/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "acav/core/rng.hpp"

namespace acav::nn {
namespace {

double loss_of(const BasicModel<double>& model, const Tensor<double>& input, std::size_t target,
               std::vector<std::size_t>* pattern) {
  const auto trace = model.forward_trace(input);
  if (pattern) {
    pattern->clear();
    for (std::size_t i = 0; i < model.layer_count(); ++i) {
      const LayerKind kind = model.layer(i).spec.kind;
      if (kind == LayerKind::relu) {
        const Tensor<double>& pre = i == 0 ? input : trace.outputs[i - 1];
        for (double v : pre.values()) pattern->push_back(v > 0.0);
      } else if (kind == LayerKind::maxpool2x2) {
        pattern->insert(pattern->end(), trace.pool_argmax[i].begin(), trace.pool_argmax[i].end());
      }
    }
  }
  // Cross-entropy from the logits, as backward() defines it.
  const Tensor<double>& logits = trace.outputs[model.layer_count() - 2];
  double peak = logits[0];
  for (double z : logits.values()) peak = std::max(peak, z);
  double sum = 0.0;
  for (double z : logits.values()) sum += std::exp(z - peak);
  return -(logits[target] - peak - std::log(sum));
}

}  // namespace

GradCheckResult check_gradients(const BasicModel<double>& model, const Tensor<double>& input,
                                std::size_t target_class, const GradCheckOptions& options) {
  const Gradients<double> analytic = model.backward(input, target_class);
  BasicModel<double> probe = model;
  auto params = probe.parameters();
  std::vector<std::size_t> base_pattern, plus_pattern, minus_pattern;
  loss_of(model, input, target_class, &base_pattern);

  GradCheckResult result;
  for (std::size_t t = 0; t < params.size(); ++t) {
    Tensor<double>& p = *params[t];
    for (std::size_t e = 0; e < p.size(); ++e) {
      const double saved = p[e];
      p[e] = saved + options.step;
      const double up = loss_of(probe, input, target_class, &plus_pattern);
      p[e] = saved - options.step;
      const double down = loss_of(probe, input, target_class, &minus_pattern);
      p[e] = saved;
      if (plus_pattern != base_pattern || minus_pattern != base_pattern) {
        ++result.skipped_kinks;
        continue;
      }
      const double numeric = (up - down) / (2.0 * options.step);
      const double a = analytic.tensors[t][e];
      const double denom = std::max({std::abs(a), std::abs(numeric), options.floor});
      const double rel = std::abs(a - numeric) / denom;
      result.max_relative_error = std::max(result.max_relative_error, rel);
      ++result.checked;
      if (!(rel < options.tolerance)) ++result.failures;
    }
  }
  return result;
}

BasicModel<double> random_toy_model(std::uint64_t seed, std::size_t max_params) {
  Rng rng(seed);
  for (;;) {
    const std::size_t channels = static_cast<std::size_t>(rng.range(1, 2));
    const std::size_t side = static_cast<std::size_t>(rng.range(5, 8));
    std::vector<LayerSpec> specs;
    Shape shape{channels, side, side};
    const int variant = rng.range(0, 2);
    if (variant != 2) {
      const std::size_t k = static_cast<std::size_t>(rng.range(2, 3));
      const std::size_t out = static_cast<std::size_t>(rng.range(1, 3));
      specs.push_back(LayerSpec::conv2d(channels, out, k, k));
      specs.push_back(LayerSpec::relu());
      if (variant == 1 && side - k + 1 >= 4) specs.push_back(LayerSpec::maxpool2x2());
    }
    specs.push_back(LayerSpec::flatten());
    specs.push_back(LayerSpec::dense(0, static_cast<std::size_t>(rng.range(2, 6))));
    specs.push_back(LayerSpec::relu());
    specs.push_back(LayerSpec::dense(0, 2));
    specs.push_back(LayerSpec::softmax());
    // Infer dense widths through a throwaway build.
    Shape s = shape;
    for (auto& spec : specs) {
      if (spec.kind == LayerKind::dense && spec.in_channels == 0) spec.in_channels = s[0];
      s = infer_output_shape(spec, s);
    }
    BasicModel<double> model(shape, specs);
    if (model.parameter_count() > max_params) continue;
    model.initialize(rng.next());
    for (auto* p : model.parameters()) {
      if (p->rank() == 1) {
        for (double& b : p->values()) b = rng.uniform(-0.1, 0.1);
      }
    }
    return model;
  }
}

Tensor<double> random_input(const BasicModel<double>& model, std::uint64_t seed) {
  Rng rng(seed);
  Tensor<double> x(model.input_shape());
  for (double& v : x.values()) v = rng.uniform();
  return x;
}

}  // namespace acav::nn
