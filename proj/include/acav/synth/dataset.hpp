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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "acav/imaging/image.hpp"
#include "acav/imaging/placement.hpp"
#include "acav/synth/concept.hpp"

namespace acav::synth {

/// Recipe for a synthetic two-class dataset.
struct DatasetSpec {
  SceneKind scene = SceneKind::fundus;
  std::size_t healthy_count = 0;
  std::size_t diseased_count = 0;
  /// Expected number of patterns of each kind per diseased image. The
  /// healthy class is pattern-free by construction.
  std::map<ConceptKind, double> diseased_frequency;
  /// Relative weights of small / medium / large patterns.
  std::array<double, 3> scale_weights = {1.0, 1.0, 1.0};
  std::size_t height = 64;
  std::size_t width = 64;
  double intensity_min = 0.85;
  double intensity_max = 1.0;
  double min_distance = 6.0;
  std::uint64_t seed = 0;
};

/// One composited pattern in a sample.
struct PatternRecord {
  ConceptKind kind = ConceptKind::bleeding;
  ScaleClass scale = ScaleClass::medium;
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  double intensity = 1.0;
  std::uint64_t seed = 0;

  friend bool operator==(const PatternRecord&, const PatternRecord&) = default;
};

struct Sample {
  imaging::Image image;
  imaging::Image mask;
  Label label = Label::healthy;
  std::vector<PatternRecord> inventory;
  std::uint64_t seed = 0;
};

struct LabeledDataset {
  SceneKind scene = SceneKind::fundus;
  std::uint64_t seed = 0;
  std::vector<Sample> samples;

  std::size_t count(Label label) const;
  /// Number of composited patterns per kind over all samples.
  std::map<ConceptKind, std::size_t> totals() const;
  /// totals() normalized to sum to one (empty when there are no patterns).
  std::map<ConceptKind, double> proportions() const;
};

/// Placement rule of a scene: fundus lesions sit within 5 px of a vessel,
/// tumors anywhere inside the brain mask.
imaging::PlacementOptions placement_rule(SceneKind scene);

/// Throws ConfigError when the spec is inconsistent.
void validate(const DatasetSpec& spec);

/// Deterministic in the spec. Healthy samples come first. Sample i draws from
/// its own stream derive_seed(spec.seed, {i}), so generation parallelizes.
LabeledDataset gen_dataset(const DatasetSpec& spec);

/// Writes images/, masks/ and manifest.json under `dir`. The manifest carries
/// `config_hash` verbatim.
void write_dataset(const LabeledDataset& data, const std::filesystem::path& dir, const std::string& config_hash);

/// Manifest bytes exactly as write_dataset stores them.
std::string manifest_json(const LabeledDataset& data, const std::string& config_hash);

/// Reads a dataset written by write_dataset. Pixel values come back 8-bit quantized.
LabeledDataset read_dataset(const std::filesystem::path& dir);

}  // namespace acav::synth
