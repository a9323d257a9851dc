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

#include "acav/imaging/compose.hpp"

#include <algorithm>
#include <cmath>

#include "acav/core/error.hpp"

namespace acav::imaging {

void validate_patch(const AlphaPatch& patch) {
  if (patch.alpha.size() != patch.pattern.height * patch.pattern.width) {
    throw ShapeError("patch alpha mask does not match pattern dimensions");
  }
  for (float a : patch.alpha) {
    if (!(a >= 0.0f && a <= 1.0f)) throw ShapeError("patch alpha outside [0,1]");
  }
}

AlphaPatch scale_patch(const AlphaPatch& patch, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw ScaleError("scale factor must be positive and finite");
  validate_patch(patch);
  const std::size_t h = patch.height(), w = patch.width();
  const double nh_f = std::round(static_cast<double>(h) * factor);
  const double nw_f = std::round(static_cast<double>(w) * factor);
  if (nh_f < 1.0 || nw_f < 1.0) {
    throw ScaleError("scaling a " + std::to_string(h) + "x" + std::to_string(w) + " patch by " +
                     std::to_string(factor) + " leaves no pixels");
  }
  const auto nh = static_cast<std::size_t>(nh_f), nw = static_cast<std::size_t>(nw_f);
  const std::size_t ch = patch.pattern.channels;

  AlphaPatch out;
  out.pattern = Image(nh, nw, ch);
  out.alpha.assign(nh * nw, 0.0f);
  out.kind = patch.kind;
  out.scale = patch.scale * factor;
  out.intensity = patch.intensity;

  auto coord = [](std::size_t dst, std::size_t src_n, std::size_t dst_n, std::size_t& i0, std::size_t& i1,
                  double& t) {
    double s = (static_cast<double>(dst) + 0.5) * static_cast<double>(src_n) / static_cast<double>(dst_n) - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(src_n - 1));
    i0 = static_cast<std::size_t>(std::floor(s));
    i1 = std::min(i0 + 1, src_n - 1);
    t = s - static_cast<double>(i0);
  };
  auto lerp2 = [](double a, double b, double c, double d, double ty, double tx) {
    const double top = (1.0 - tx) * a + tx * b;
    const double bottom = (1.0 - tx) * c + tx * d;
    return std::clamp((1.0 - ty) * top + ty * bottom, 0.0, 1.0);
  };

  for (std::size_t y = 0; y < nh; ++y) {
    std::size_t y0, y1;
    double ty;
    coord(y, h, nh, y0, y1, ty);
    for (std::size_t x = 0; x < nw; ++x) {
      std::size_t x0, x1;
      double tx;
      coord(x, w, nw, x0, x1, tx);
      for (std::size_t c = 0; c < ch; ++c) {
        out.pattern.at(y, x, c) = static_cast<float>(
            lerp2(patch.pattern.at(y0, x0, c), patch.pattern.at(y0, x1, c), patch.pattern.at(y1, x0, c),
                  patch.pattern.at(y1, x1, c), ty, tx));
      }
      out.alpha[y * nw + x] = static_cast<float>(lerp2(patch.alpha_at(y0, x0), patch.alpha_at(y0, x1),
                                                       patch.alpha_at(y1, x0), patch.alpha_at(y1, x1), ty, tx));
    }
  }
  return out;
}

Image compose(const Image& image, const AlphaPatch& patch, const Placement& placement) {
  validate_patch(patch);
  const AlphaPatch scaled = placement.scale == 1.0 ? patch : scale_patch(patch, placement.scale);
  const Image& pat = scaled.pattern;
  if (pat.channels != image.channels && pat.channels != 1) {
    throw ShapeError("cannot composite a " + std::to_string(pat.channels) + "-channel patch into a " +
                     std::to_string(image.channels) + "-channel image");
  }
  if (placement.row + pat.height > image.height || placement.col + pat.width > image.width) {
    throw PlacementError("patch " + std::to_string(pat.height) + "x" + std::to_string(pat.width) + " at (" +
                         std::to_string(placement.row) + "," + std::to_string(placement.col) +
                         ") exceeds image bounds " + std::to_string(image.height) + "x" +
                         std::to_string(image.width));
  }
  const double gain = scaled.intensity * placement.intensity;
  if (!std::isfinite(gain) || gain < 0.0) throw PlacementError("intensity must be non-negative");

  Image out = image;
  for (std::size_t y = 0; y < pat.height; ++y) {
    for (std::size_t x = 0; x < pat.width; ++x) {
      const double a = std::clamp(static_cast<double>(scaled.alpha_at(y, x)) * gain, 0.0, 1.0);
      if (a == 0.0) continue;
      for (std::size_t c = 0; c < image.channels; ++c) {
        const double base = image.at(placement.row + y, placement.col + x, c);
        const double over = pat.at(y, x, pat.channels == 1 ? 0 : c);
        const double v = std::clamp((1.0 - a) * base + a * over, 0.0, 1.0);
        out.at(placement.row + y, placement.col + x, c) = static_cast<float>(v);
      }
    }
  }
  return out;
}

}  // namespace acav::imaging
