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
#include <map>
#include <span>
#include <vector>

#include "acav/nn/model.hpp"
#include "acav/synth/concept.hpp"

namespace acav::probe {

/// Mean activation of one class at one layer, over the samples the model
/// classifies correctly and confidently.
struct ReferenceVector {
  synth::Label label = synth::Label::healthy;
  std::size_t layer = 0;
  std::vector<double> values;
  std::size_t count = 0;
};

/// Throws EmptyReferenceError when no sample of `label` qualifies.
ReferenceVector reference_vector(const nn::Model& model, std::span<const Tensor<float>> inputs,
                                 std::span<const synth::Label> labels, synth::Label label, std::size_t layer,
                                 double margin);

struct LayerReferences {
  ReferenceVector healthy;
  ReferenceVector diseased;
};

/// Healthy and diseased references for several layers from one pass over the data.
std::map<std::size_t, LayerReferences> build_references(const nn::Model& model,
                                                        std::span<const Tensor<float>> inputs,
                                                        std::span<const synth::Label> labels,
                                                        std::span<const std::size_t> layers, double margin);

}  // namespace acav::probe
