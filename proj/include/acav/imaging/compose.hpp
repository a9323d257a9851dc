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
#include <string>
#include <vector>

#include "acav/imaging/image.hpp"

namespace acav::imaging {

/// A concept pattern with per-pixel opacity.
struct AlphaPatch {
  Image pattern;
  std::vector<float> alpha;  // height * width, in [0,1]
  std::string kind;
  double scale = 1.0;      // nominal scale relative to the generated size
  double intensity = 1.0;  // nominal intensity in [0,1]

  std::size_t height() const { return pattern.height; }
  std::size_t width() const { return pattern.width; }
  float alpha_at(std::size_t r, std::size_t c) const { return alpha[r * pattern.width + c]; }
};

/// Where and how strongly a patch is composited. (row, col) is the top-left
/// corner of the patch after scaling.
struct Placement {
  std::size_t row = 0;
  std::size_t col = 0;
  double scale = 1.0;
  double intensity = 1.0;

  friend bool operator==(const Placement&, const Placement&) = default;
};

/// Throws ShapeError unless pattern and alpha agree and alpha lies in [0,1].
void validate_patch(const AlphaPatch& patch);

/// Bilinear resampling of pattern and alpha to round(factor * size).
AlphaPatch scale_patch(const AlphaPatch& patch, double factor);

/// Alpha blend of `patch` into `image`:
///   out = (1 - a) * image + a * pattern,  a = clamp(alpha * intensity, 0, 1)
/// where intensity = patch.intensity * placement.intensity. Pixels outside the
/// footprint are copied unchanged. A one-channel patch is applied to every
/// channel. Throws PlacementError if the scaled patch leaves the image.
Image compose(const Image& image, const AlphaPatch& patch, const Placement& placement);

}  // namespace acav::imaging
