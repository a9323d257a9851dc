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
#include <vector>

#include "acav/nn/model.hpp"

namespace acav::nn {

struct TrainConfig {
  double learning_rate = 0.05;
  std::size_t epochs = 10;
  std::size_t batch_size = 16;
  std::uint64_t master_seed = 0;
};

struct TrainingSet {
  std::vector<Tensor<float>> inputs;
  std::vector<std::size_t> labels;  // 0 healthy, 1 diseased
};

struct TrainResult {
  Model model;
  std::vector<double> loss_history;  // mean sample loss per epoch
};

/// Plain mini-batch SGD on softmax cross-entropy. Each epoch visits the data in
/// a permutation drawn from (master_seed, epoch); the result depends only on
/// the initial model, the data and the config.
TrainResult train(Model model, const TrainingSet& data, const TrainConfig& config);

/// Fraction of samples whose arg-max prediction matches the label.
double accuracy(const Model& model, const TrainingSet& data);

}  // namespace acav::nn
