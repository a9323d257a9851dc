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

#include "acav/imaging/placement.hpp"

#include <cmath>

#include "acav/core/error.hpp"
#include "acav/core/rng.hpp"

namespace acav::imaging {

Image dilate(const Image& mask, int radius) {
  if (mask.channels != 1) throw ShapeError("mask must be single-channel");
  if (radius < 0) throw ConfigError("dilation radius must be non-negative");
  Image out(mask.height, mask.width, 1, 0.0f);
  const auto H = static_cast<long>(mask.height), W = static_cast<long>(mask.width);
  const long r2 = static_cast<long>(radius) * radius;
  for (long y = 0; y < H; ++y) {
    for (long x = 0; x < W; ++x) {
      if (!(mask.at(y, x) > 0.5f)) continue;
      for (long dy = -radius; dy <= radius; ++dy) {
        for (long dx = -radius; dx <= radius; ++dx) {
          if (dy * dy + dx * dx > r2) continue;
          const long yy = y + dy, xx = x + dx;
          if (yy >= 0 && yy < H && xx >= 0 && xx < W) out.at(yy, xx) = 1.0f;
        }
      }
    }
  }
  return out;
}

std::vector<Placement> sample_placements(const Image& mask, std::size_t count, double min_distance,
                                         std::uint64_t seed, const PlacementOptions& options) {
  if (mask.channels != 1) throw ShapeError("placement mask must be single-channel");
  if (count == 0) return {};
  const std::size_t fh = options.footprint_h, fw = options.footprint_w;
  if (fh == 0 || fw == 0 || fh > mask.height || fw > mask.width) throw PlacementInfeasibleError(count, 0);

  const Image support = dilate(mask, options.dilation_radius);
  std::vector<std::pair<std::size_t, std::size_t>> candidates;
  for (std::size_t r = fh / 2; r + fh - fh / 2 <= mask.height; ++r) {
    for (std::size_t c = fw / 2; c + fw - fw / 2 <= mask.width; ++c) {
      if (support.at(r, c) > 0.5f) candidates.emplace_back(r, c);
    }
  }
  Rng rng(seed);
  for (std::size_t i = candidates.size(); i > 1; --i) std::swap(candidates[i - 1], candidates[rng.below(i)]);

  std::vector<std::pair<std::size_t, std::size_t>> chosen;
  const double d2 = min_distance * min_distance;
  for (const auto& cand : candidates) {
    bool ok = true;
    for (const auto& prev : chosen) {
      const double dy = static_cast<double>(cand.first) - static_cast<double>(prev.first);
      const double dx = static_cast<double>(cand.second) - static_cast<double>(prev.second);
      if (dy * dy + dx * dx < d2) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    chosen.push_back(cand);
    if (chosen.size() == count) break;
  }
  if (chosen.size() < count) throw PlacementInfeasibleError(count, chosen.size());

  std::vector<Placement> out;
  out.reserve(count);
  for (const auto& [r, c] : chosen) out.push_back({r - fh / 2, c - fw / 2, options.scale, options.intensity});
  return out;
}

}  // namespace acav::imaging
