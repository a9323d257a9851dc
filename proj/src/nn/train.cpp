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

#include "acav/nn/train.hpp"

#include <cmath>
#include <numeric>

#include "acav/core/error.hpp"
#include "acav/core/log.hpp"
#include "acav/core/rng.hpp"

namespace acav::nn {
namespace {

void validate(const TrainingSet& data, const TrainConfig& config) {
  if (!(config.learning_rate > 0.0) || !std::isfinite(config.learning_rate)) {
    throw ConfigError("learning_rate must be a positive finite number");
  }
  if (config.batch_size == 0) throw ConfigError("batch_size must be positive");
  if (data.inputs.size() != data.labels.size()) throw ConfigError("training set has mismatched labels");
  if (config.epochs == 0) return;
  if (config.batch_size > data.inputs.size()) {
    throw ConfigError("batch_size " + std::to_string(config.batch_size) + " exceeds dataset size " +
                      std::to_string(data.inputs.size()));
  }
  bool has[2] = {false, false};
  for (std::size_t y : data.labels) {
    if (y > 1) throw ConfigError("labels must be 0 or 1");
    has[y] = true;
  }
  if (!has[0] || !has[1]) throw ConfigError("training set must contain both classes");
}

}  // namespace

TrainResult train(Model model, const TrainingSet& data, const TrainConfig& config) {
  validate(data, config);
  TrainResult result;
  const std::size_t n = data.inputs.size();
  std::vector<std::size_t> order(n);
  std::vector<Tensor<float>> batch_x;
  std::vector<std::size_t> batch_y;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(config.master_seed, {0x7472u, epoch}));
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

    double loss_sum = 0.0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t end = std::min(n, start + config.batch_size);
      batch_x.clear();
      batch_y.clear();
      for (std::size_t k = start; k < end; ++k) {
        batch_x.push_back(data.inputs[order[k]]);
        batch_y.push_back(data.labels[order[k]]);
      }
      Gradients<float> grads;
      try {
        grads = batch_gradient<float>(model, batch_x, batch_y);
      } catch (const NumericError& e) {
        throw TrainingDivergedError(epoch, e.what());
      }
      loss_sum += grads.loss * static_cast<double>(end - start);

      auto params = model.parameters();
      for (std::size_t t = 0; t < params.size(); ++t) {
        Tensor<float>& p = *params[t];
        const Tensor<float>& g = grads.tensors[t];
        for (std::size_t e = 0; e < p.size(); ++e) {
          p[e] = static_cast<float>(static_cast<double>(p[e]) - config.learning_rate * static_cast<double>(g[e]));
        }
        if (!p.all_finite()) throw TrainingDivergedError(epoch, "parameters became non-finite");
      }
    }
    const double mean_loss = loss_sum / static_cast<double>(n);
    if (!std::isfinite(mean_loss)) throw TrainingDivergedError(epoch, "mean loss is not finite");
    result.loss_history.push_back(mean_loss);
    log::debug("epoch ", epoch, " loss ", mean_loss);
  }
  result.model = std::move(model);
  return result;
}

double accuracy(const Model& model, const TrainingSet& data) {
  if (data.inputs.empty()) return 0.0;
  const auto probs = forward_batch<float>(model, data.inputs);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const std::size_t pred = probs[i][1] > probs[i][0] ? 1 : 0;
    if (pred == data.labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.inputs.size());
}

}  // namespace acav::nn
