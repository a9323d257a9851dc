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

#include "acav/imaging/compose.hpp"
#include "acav/imaging/image.hpp"
#include "acav/synth/concept.hpp"

namespace acav::synth {

struct Background {
  imaging::Image image;
  imaging::Image mask;    // fundus: vessel centre lines; mri: brain tissue
  imaging::Image region;  // fundus: retinal disc; mri: inside the skull
};

/// Fundus: warm-toned disc, optic disc, dark branching vessels (RGB).
/// MRI: gray ellipse with skull rim and ventricles on black (grayscale).
Background gen_background(SceneKind scene, std::uint64_t seed, std::size_t height = 64, std::size_t width = 64);

/// fatty_dots: cluster of 3-8 small bright yellowish dots.
/// cotton_wool: one soft pale blob.
/// bleeding: irregular dark red blob, the largest retinal lesion.
/// tumor: bright grayscale mass, generated large and resampled down.
imaging::AlphaPatch gen_pattern(ConceptKind kind, std::uint64_t seed, ScaleClass scale);

}  // namespace acav::synth
