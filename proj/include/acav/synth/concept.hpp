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
#include <string>
#include <string_view>

namespace acav::synth {

enum class ConceptKind { fatty_dots, cotton_wool, bleeding, tumor };
enum class ScaleClass { small, medium, large };
enum class SceneKind { fundus, mri };
enum class Label : std::size_t { healthy = 0, diseased = 1 };

inline constexpr std::array<ConceptKind, 4> kAllConceptKinds = {ConceptKind::fatty_dots, ConceptKind::cotton_wool,
                                                                 ConceptKind::bleeding, ConceptKind::tumor};
inline constexpr std::array<ScaleClass, 3> kAllScaleClasses = {ScaleClass::small, ScaleClass::medium,
                                                               ScaleClass::large};

std::string to_string(ConceptKind kind);
std::string to_string(ScaleClass scale);
std::string to_string(SceneKind scene);
std::string to_string(Label label);

// Parsers throw ConfigError on unknown names.
ConceptKind parse_concept_kind(std::string_view name);
ScaleClass parse_scale_class(std::string_view name);
SceneKind parse_scene_kind(std::string_view name);
Label parse_label(std::string_view name);

/// Scene a concept kind belongs to: tumors go into MRI scenes, the retinal
/// lesions into fundus scenes.
SceneKind scene_of(ConceptKind kind);

inline std::size_t channels_of(SceneKind scene) { return scene == SceneKind::fundus ? 3 : 1; }

}  // namespace acav::synth
