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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "acav/nn/train.hpp"
#include "acav/probe/experiment.hpp"
#include "acav/synth/dataset.hpp"

namespace acav::cli {

struct ProbeSettings {
  double margin = 0.2;
  std::vector<std::string> layers = {"n-1", "n-2"};
  std::size_t pool_size = 50;
  std::size_t reference_healthy = 60;
  std::size_t reference_diseased = 60;
  double min_distance = 5.0;
  std::vector<probe::ConceptConfig> concepts;  // expanded sweeps
};

/// Everything one pipeline run needs. Parsed from strict JSON: unknown keys
/// are rejected at every level.
struct ExperimentConfig {
  std::uint64_t seed = 0;
  synth::DatasetSpec dataset;
  nn::TrainConfig train;
  ProbeSettings probe;
  std::optional<std::filesystem::path> data_dir;
  std::string hash;  // SHA-256 of the config bytes (and any seed override)
};

/// Parses config text. `seed_override` replaces the top-level seed and is
/// folded into the hash.
ExperimentConfig parse_config(const std::string& text, std::optional<std::uint64_t> seed_override = {});
ExperimentConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override = {});

/// Stream seeds for the pipeline stages, all derived from the master seed.
std::uint64_t dataset_seed(const ExperimentConfig& c);
std::uint64_t init_seed(const ExperimentConfig& c);
std::uint64_t train_seed(const ExperimentConfig& c);
std::uint64_t reference_seed(const ExperimentConfig& c);
std::uint64_t pool_seed(const ExperimentConfig& c);
std::uint64_t probe_seed(const ExperimentConfig& c);

}  // namespace acav::cli
