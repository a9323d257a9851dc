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

using imaging::Image;

float clamp01(double v) { return static_cast<float>(std::clamp(v, 0.0, 1.0)); }

Background fundus(std::uint64_t seed, std::size_t H, std::size_t W) {
  Rng rng(seed);
  const double cy = H / 2.0 - 0.5 + rng.uniform(-1.5, 1.5);
  const double cx = W / 2.0 - 0.5 + rng.uniform(-1.5, 1.5);
  const double radius = 0.45 * static_cast<double>(std::min(H, W)) + rng.uniform(-1.0, 1.0);
  const double tone = rng.uniform(-0.05, 0.05);
  const double base[3] = {0.78 + tone, 0.38 + 0.6 * tone, 0.16 + 0.3 * tone};

  const double side = rng.uniform() < 0.5 ? -1.0 : 1.0;
  const double od_y = cy + rng.uniform(-2.0, 2.0);
  const double od_x = cx + side * 0.42 * radius;
  const double od_r = 0.14 * radius;

  // Vessel intensity map: random walks out of the optic disc.
  std::vector<double> vessel(H * W, 0.0);
  const int n_vessels = rng.range(6, 8);
  for (int v = 0; v < n_vessels; ++v) {
    double angle = 2.0 * std::numbers::pi * (v + rng.uniform(0.0, 0.6)) / n_vessels;
    double y = od_y, x = od_x;
    const double width = rng.uniform(0.9, 1.5);
    double turn = rng.uniform(-0.05, 0.05);
    for (int step = 0; step < 400; ++step) {
      turn = 0.9 * turn + rng.uniform(-0.03, 0.03);
      angle += turn;
      y += 0.5 * std::sin(angle);
      x += 0.5 * std::cos(angle);
      if (std::hypot(y - cy, x - cx) > radius - 1.5) break;
      const long y0 = std::lround(y), x0 = std::lround(x);
      for (long dy = -2; dy <= 2; ++dy) {
        for (long dx = -2; dx <= 2; ++dx) {
          const long yy = y0 + dy, xx = x0 + dx;
          if (yy < 0 || xx < 0 || yy >= static_cast<long>(H) || xx >= static_cast<long>(W)) continue;
          const double d = std::hypot(static_cast<double>(yy) - y, static_cast<double>(xx) - x);
          double& cell = vessel[static_cast<std::size_t>(yy) * W + static_cast<std::size_t>(xx)];
          cell = std::max(cell, std::clamp(1.0 - d / (width + 0.5), 0.0, 1.0));
        }
      }
    }
  }

  Background bg{Image(H, W, 3), Image(H, W, 1), Image(H, W, 1)};
  for (std::size_t r = 0; r < H; ++r) {
    for (std::size_t c = 0; c < W; ++c) {
      const double d = std::hypot(r - cy, c - cx);
      if (d >= radius) continue;
      const double rel = d / radius;
      const double vignette = 1.0 - 0.35 * rel * rel;
      const double od = std::exp(-std::pow(std::hypot(r - od_y, c - od_x) / od_r, 2.0));
      const double v = vessel[r * W + c];
      const double optic[3] = {0.98, 0.85, 0.55};
      const double vcol[3] = {0.42, 0.10, 0.06};
      for (std::size_t ch = 0; ch < 3; ++ch) {
        double px = base[ch] * vignette;
        px = (1.0 - od) * px + od * optic[ch];
        px = (1.0 - 0.75 * v) * px + 0.75 * v * vcol[ch];
        bg.image.at(r, c, ch) = clamp01(px + 0.012 * rng.normal());
      }
      bg.region.at(r, c) = 1.0f;
      if (v > 0.5) bg.mask.at(r, c) = 1.0f;
    }
  }
  return bg;
}

Background mri(std::uint64_t seed, std::size_t H, std::size_t W) {
  Rng rng(seed);
  const double cy = H / 2.0 - 0.5 + rng.uniform(-1.5, 1.5);
  const double cx = W / 2.0 - 0.5 + rng.uniform(-1.5, 1.5);
  const double ay = 0.40 * H + rng.uniform(-1.5, 1.5);
  const double ax = 0.33 * W + rng.uniform(-1.5, 1.5);
  const double gray = rng.uniform(0.40, 0.50);
  const double vent_off = rng.uniform(2.0, 3.5);
  double waves[3][3];
  for (auto& w : waves) {
    w[0] = rng.uniform(0.15, 0.5);
    w[1] = rng.uniform(0.15, 0.5);
    w[2] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }

  Background bg{Image(H, W, 1), Image(H, W, 1), Image(H, W, 1)};
  for (std::size_t r = 0; r < H; ++r) {
    for (std::size_t c = 0; c < W; ++c) {
      const double ny = (r - cy) / ay, nx = (c - cx) / ax;
      const double rho = std::sqrt(ny * ny + nx * nx);
      double px = 0.0;
      if (rho < 1.0) {
        px = gray;
        for (const auto& w : waves) px += 0.03 * std::sin(w[0] * r + w[1] * c + w[2]);
        for (double side : {-1.0, 1.0}) {
          const double vy = (r - cy) / 4.5, vx = (c - cx - side * vent_off) / 1.8;
          px -= 0.22 * std::exp(-(vy * vy + vx * vx));
        }
        bg.region.at(r, c) = 1.0f;
        if (rho < 0.8) bg.mask.at(r, c) = 1.0f;
      } else if (rho < 1.12) {
        px = 0.85 - 1.5 * std::abs(rho - 1.06);
        bg.region.at(r, c) = 1.0f;
      }
      bg.image.at(r, c) = clamp01(px + 0.012 * rng.normal());
    }
  }
  return bg;
}

}  // namespace

Background gen_background(SceneKind scene, std::uint64_t seed, std::size_t height, std::size_t width) {
  return scene == SceneKind::fundus ? fundus(seed, height, width) : mri(seed, height, width);
}

}  // namespace acav::synth
