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

#include "acav/synth/concept.hpp"

#include "acav/core/error.hpp"

namespace acav::synth {

std::string to_string(ConceptKind kind) {
  switch (kind) {
    case ConceptKind::fatty_dots: return "fatty_dots";
    case ConceptKind::cotton_wool: return "cotton_wool";
    case ConceptKind::bleeding: return "bleeding";
    case ConceptKind::tumor: return "tumor";
  }
  return "unknown";
}

std::string to_string(ScaleClass scale) {
  switch (scale) {
    case ScaleClass::small: return "small";
    case ScaleClass::medium: return "medium";
    case ScaleClass::large: return "large";
  }
  return "unknown";
}

std::string to_string(SceneKind scene) { return scene == SceneKind::fundus ? "fundus" : "mri"; }

std::string to_string(Label label) { return label == Label::healthy ? "healthy" : "diseased"; }

ConceptKind parse_concept_kind(std::string_view name) {
  for (ConceptKind k : kAllConceptKinds)
    if (to_string(k) == name) return k;
  throw ConfigError("unknown concept kind '" + std::string(name) + "'");
}

ScaleClass parse_scale_class(std::string_view name) {
  for (ScaleClass s : kAllScaleClasses)
    if (to_string(s) == name) return s;
  throw ConfigError("unknown scale class '" + std::string(name) + "'");
}

SceneKind parse_scene_kind(std::string_view name) {
  if (name == "fundus") return SceneKind::fundus;
  if (name == "mri") return SceneKind::mri;
  throw ConfigError("unknown scene kind '" + std::string(name) + "'");
}

Label parse_label(std::string_view name) {
  if (name == "healthy") return Label::healthy;
  if (name == "diseased") return Label::diseased;
  throw ConfigError("unknown label '" + std::string(name) + "'");
}

SceneKind scene_of(ConceptKind kind) { return kind == ConceptKind::tumor ? SceneKind::mri : SceneKind::fundus; }

}  // namespace acav::synth
