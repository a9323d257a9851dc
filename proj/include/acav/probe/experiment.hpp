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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "acav/imaging/image.hpp"
#include "acav/imaging/placement.hpp"
#include "acav/nn/model.hpp"
#include "acav/probe/metrics.hpp"
#include "acav/probe/reference.hpp"
#include "acav/synth/concept.hpp"
#include "acav/synth/dataset.hpp"

namespace acav::probe {

/// One augmentation recipe: `count` patterns of every kind in `kinds`.
struct ConceptConfig {
  std::string name;
  std::vector<synth::ConceptKind> kinds;
  std::size_t count = 1;
  synth::ScaleClass scale = synth::ScaleClass::medium;
  double intensity = 1.0;
};

struct ProbeLayer {
  std::size_t index = 0;
  std::string name;  // "n-1", "n-2", ...
};

/// Probe points "n-1" .. "n-depth" of a model.
std::vector<ProbeLayer> probe_layers(const nn::Model& model, std::span<const std::string> names);

struct ExperimentOptions {
  double margin = 0.2;
  std::uint64_t seed = 0;
  double min_distance = 5.0;
  imaging::PlacementOptions placement;  // dilation radius; footprint is set per pair
};

/// One concept x layer row. Column names follow the CSV header.
struct AcavRow {
  std::string concept_name;
  std::string kinds;  // '+'-joined
  std::size_t count = 0;
  std::string scale;
  double intensity = 1.0;
  std::string layer;
  std::size_t layer_index = 0;
  std::size_t samples = 0;
  double sim_original = 0.0;
  double sim_augmented = 0.0;
  double abs_deviation = 0.0;
  double delta_v = 0.0;
  double flip_rate = 0.0;
  double literal_ratio = 0.0;
  std::size_t flipped = 0;
  std::size_t preserved = 0;
  std::size_t aug_abstained = 0;
  double angle_healthy = 0.0;
  double angle_diseased = 0.0;
  double angle_original_healthy = 0.0;
  double angle_original_diseased = 0.0;
};

struct AcavReport {
  std::vector<AcavRow> rows;
  double entropy = 0.0;  // pattern entropy of the training data, natural log
  std::map<std::string, double> proportions;
  std::uint64_t seed = 0;
  std::string config_hash;
  double margin = 0.2;
  std::size_t pool_size = 0;
  std::size_t eligible = 0;  // pool samples confidently classified healthy
};

/// Composites every pattern of `config` into `image` at positions drawn
/// around `mask`. Pure function of its arguments.
imaging::Image augment(const imaging::Image& image, const imaging::Image& mask, const ConceptConfig& config,
                       std::uint64_t pair_seed, const ExperimentOptions& options);

/// Runs every config on the pool samples the model confidently calls
/// healthy. Pair i uses seed derive_seed(options.seed, {i}) for every
/// config, so configs differing only in count share their first patterns.
/// Results do not depend on the thread count.
AcavReport run_concept_experiment(const nn::Model& model, std::span<const synth::Sample> healthy_pool,
                                  const std::map<std::size_t, LayerReferences>& references,
                                  std::span<const ConceptConfig> configs, std::span<const ProbeLayer> layers,
                                  const ExperimentOptions& options);

}  // namespace acav::probe
