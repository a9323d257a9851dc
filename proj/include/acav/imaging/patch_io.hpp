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

#include <filesystem>
#include <string>

#include "acav/imaging/compose.hpp"

namespace acav::imaging {

/// Writes <stem>_pattern.pgm|ppm, <stem>_alpha.pgm and a <stem>.json sidecar
/// with kind, scale and intensity. Returns the sidecar path.
std::filesystem::path save_patch(const AlphaPatch& patch, const std::filesystem::path& dir,
                                 const std::string& stem);

/// Loads a patch from its JSON sidecar.
AlphaPatch load_patch(const std::filesystem::path& sidecar);

}  // namespace acav::imaging
