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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "acav/core/rng.hpp"
#include "acav/synth/generators.hpp"

namespace acav::synth {
namespace {

using imaging::AlphaPatch;
using imaging::Image;

std::size_t patch_size(ConceptKind kind, ScaleClass scale) {
  static constexpr std::size_t sizes[4][3] = {
      {7, 9, 11},   // fatty_dots
      {7, 9, 11},   // cotton_wool
      {9, 13, 17},  // bleeding
      {8, 12, 16},  // tumor
  };
  return sizes[static_cast<int>(kind)][static_cast<int>(scale)];
}

AlphaPatch blank(ConceptKind kind, std::size_t size, std::size_t channels) {
  AlphaPatch p;
  p.pattern = Image(size, size, channels);
  p.alpha.assign(size * size, 0.0f);
  p.kind = to_string(kind);
  return p;
}

void fill_color(AlphaPatch& p, const double* rgb, Rng& rng, double jitter) {
  for (std::size_t r = 0; r < p.height(); ++r)
    for (std::size_t c = 0; c < p.width(); ++c)
      for (std::size_t ch = 0; ch < p.pattern.channels; ++ch)
        p.pattern.at(r, c, ch) = static_cast<float>(std::clamp(rgb[ch] + jitter * rng.uniform(-1.0, 1.0), 0.0, 1.0));
}

/// Radius of an irregular blob in direction theta.
struct Outline {
  double base;
  double amp[3];
  double phase[3];
  double at(double theta) const {
    double r = 1.0;
    for (int k = 0; k < 3; ++k) r += amp[k] * std::sin((k + 2) * theta + phase[k]);
    return base * r;
  }
};

Outline random_outline(Rng& rng, double base, double roughness) {
  Outline o{base, {}, {}};
  for (int k = 0; k < 3; ++k) {
    o.amp[k] = rng.uniform(0.0, roughness);
    o.phase[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  return o;
}

void paint_blob(AlphaPatch& p, const Outline& outline, double edge, double peak) {
  const double centre = (static_cast<double>(p.height()) - 1.0) / 2.0;
  for (std::size_t r = 0; r < p.height(); ++r) {
    for (std::size_t c = 0; c < p.width(); ++c) {
      const double dy = r - centre, dx = c - centre;
      const double d = std::hypot(dy, dx);
      const double bound = outline.at(std::atan2(dy, dx));
      p.alpha[r * p.width() + c] = static_cast<float>(peak * std::clamp((bound - d) / edge + 0.5, 0.0, 1.0));
    }
  }
}

AlphaPatch fatty_dots(Rng& rng, std::size_t size) {
  AlphaPatch p = blank(ConceptKind::fatty_dots, size, 3);
  const double color[3] = {1.0, 0.93, 0.45};
  fill_color(p, color, rng, 0.03);
  const int n = rng.range(3, 8);
  const double span = static_cast<double>(size) - 3.0;
  for (int i = 0; i < n; ++i) {
    const double y = 1.5 + rng.uniform() * span, x = 1.5 + rng.uniform() * span;
    const double rad = rng.uniform(0.8, 1.3);
    for (std::size_t r = 0; r < size; ++r) {
      for (std::size_t c = 0; c < size; ++c) {
        const double d = std::hypot(r - y, c - x);
        const double a = std::exp(-1.2 * (d / rad) * (d / rad));
        float& cell = p.alpha[r * size + c];
        cell = std::max(cell, static_cast<float>(a));
      }
    }
  }
  return p;
}

AlphaPatch cotton_wool(Rng& rng, std::size_t size) {
  AlphaPatch p = blank(ConceptKind::cotton_wool, size, 3);
  const double color[3] = {0.96, 0.93, 0.82};
  fill_color(p, color, rng, 0.02);
  const double centre = (static_cast<double>(size) - 1.0) / 2.0;
  const double sy = size / 4.5 * rng.uniform(0.9, 1.1), sx = size / 4.5 * rng.uniform(0.9, 1.1);
  for (std::size_t r = 0; r < size; ++r) {
    for (std::size_t c = 0; c < size; ++c) {
      const double ny = (r - centre) / sy, nx = (c - centre) / sx;
      p.alpha[r * size + c] = static_cast<float>(0.9 * std::exp(-0.5 * (ny * ny + nx * nx)));
    }
  }
  return p;
}

AlphaPatch bleeding(Rng& rng, std::size_t size) {
  AlphaPatch p = blank(ConceptKind::bleeding, size, 3);
  const double color[3] = {0.40, 0.04, 0.03};
  fill_color(p, color, rng, 0.03);
  paint_blob(p, random_outline(rng, 0.36 * size, 0.15), 1.2, 0.95);
  return p;
}

AlphaPatch tumor(Rng& rng, ScaleClass scale) {
  const std::size_t base = patch_size(ConceptKind::tumor, ScaleClass::large);
  AlphaPatch p = blank(ConceptKind::tumor, base, 1);
  const Outline outline = random_outline(rng, 0.42 * base, 0.12);
  const double centre = (static_cast<double>(base) - 1.0) / 2.0;
  for (std::size_t r = 0; r < base; ++r) {
    for (std::size_t c = 0; c < base; ++c) {
      const double d = std::hypot(r - centre, c - centre) / outline.base;
      p.pattern.at(r, c) = static_cast<float>(std::clamp(0.95 - 0.15 * d + 0.02 * rng.normal(), 0.0, 1.0));
    }
  }
  paint_blob(p, outline, 1.5, 1.0);
  if (scale == ScaleClass::large) return p;
  const double factor = static_cast<double>(patch_size(ConceptKind::tumor, scale)) / static_cast<double>(base);
  return imaging::scale_patch(p, factor);
}

}  // namespace

imaging::AlphaPatch gen_pattern(ConceptKind kind, std::uint64_t seed, ScaleClass scale) {
  Rng rng(seed);
  const std::size_t size = patch_size(kind, scale);
  switch (kind) {
    case ConceptKind::fatty_dots: return fatty_dots(rng, size);
    case ConceptKind::cotton_wool: return cotton_wool(rng, size);
    case ConceptKind::bleeding: return bleeding(rng, size);
    case ConceptKind::tumor: return tumor(rng, scale);
  }
  return {};
}

}  // namespace acav::synth
