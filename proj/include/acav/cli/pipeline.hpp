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

// Library form of the gen-data -> train -> probe pipeline. The CLI commands
// are thin wrappers that add file IO and run manifests.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <vector>

#include "acav/cli/config.hpp"
#include "acav/nn/model.hpp"
#include "acav/nn/train.hpp"
#include "acav/probe/experiment.hpp"
#include "acav/synth/dataset.hpp"

namespace acav::cli {

nn::TrainingSet to_training_set(const synth::LabeledDataset& data);

struct TrainedModel {
  nn::Model model;
  std::vector<double> loss_history;
  double train_accuracy = 0.0;
};

/// Builds the classifier for the dataset scene and trains it with the
/// configured SGD settings.
TrainedModel train_model(const ExperimentConfig& config, const synth::LabeledDataset& data);

/// True when the first min(3, epochs) losses are strictly decreasing.
bool early_loss_decreasing(const std::vector<double>& loss_history);

/// Reference set drawn from the dataset spec under reference_seed().
synth::LabeledDataset reference_set(const ExperimentConfig& config);
/// Held-out healthy pool drawn under pool_seed().
synth::LabeledDataset healthy_pool(const ExperimentConfig& config);

/// Builds references, runs every configured concept and fills in the
/// entropy of `pattern_weights` (pattern counts of the training data, or any
/// non-negative weights; they are normalized here).
probe::AcavReport probe_model(const ExperimentConfig& config, const nn::Model& model,
                              const std::map<synth::ConceptKind, double>& pattern_weights);

/// Pattern counts per kind as recorded in a dataset manifest.
std::map<synth::ConceptKind, double> manifest_totals(const std::filesystem::path& dataset_dir);

}  // namespace acav::cli
