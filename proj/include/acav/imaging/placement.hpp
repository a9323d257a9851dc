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
#include <vector>

#include "acav/imaging/compose.hpp"
#include "acav/imaging/image.hpp"

namespace acav::imaging {

/// Binary (0/1) support of `mask > 0.5` grown by a Euclidean disk of `radius`.
Image dilate(const Image& mask, int radius);

struct PlacementOptions {
  int dilation_radius = 5;       // anchors may sit this far from the mask
  std::size_t footprint_h = 1;   // size of the patch that will be placed;
  std::size_t footprint_w = 1;   // the anchor is its centre pixel
  double scale = 1.0;            // copied into each Placement
  double intensity = 1.0;
};

/// Centre pixel (row, col) of a placement with the given footprint.
inline std::pair<std::size_t, std::size_t> anchor_of(const Placement& p, std::size_t fh, std::size_t fw) {
  return {p.row + fh / 2, p.col + fw / 2};
}

/// Draws `count` anchors without replacement from the dilated mask support,
/// pairwise at least `min_distance` apart, with the footprint inside the
/// image. Deterministic in `seed`. Throws PlacementInfeasibleError with the
/// achieved count when the constraints cannot be met.
std::vector<Placement> sample_placements(const Image& mask, std::size_t count, double min_distance,
                                         std::uint64_t seed, const PlacementOptions& options = {});

}  // namespace acav::imaging
