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
#include <vector>

#include "acav/core/tensor.hpp"

namespace acav::imaging {

/// Raster with values in [0,1], row-major, channels interleaved.
struct Image {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 0;
  std::vector<float> pixels;

  Image() = default;
  Image(std::size_t h, std::size_t w, std::size_t c, float fill = 0.0f);
  Image(std::size_t h, std::size_t w, std::size_t c, std::vector<float> px);

  std::size_t index(std::size_t r, std::size_t col, std::size_t ch = 0) const {
    return (r * width + col) * channels + ch;
  }
  float& at(std::size_t r, std::size_t col, std::size_t ch = 0) { return pixels[index(r, col, ch)]; }
  float at(std::size_t r, std::size_t col, std::size_t ch = 0) const { return pixels[index(r, col, ch)]; }

  /// Rec. 601 luma for RGB, the value itself for grayscale.
  double luminance(std::size_t r, std::size_t col) const;

  friend bool operator==(const Image&, const Image&) = default;
};

/// Planar [C,H,W] tensor for the network, pixel values mapped to 2v - 1.
Tensor<float> to_tensor(const Image& image);

/// Mean luminance over pixels where `weight` (same size, 1 channel) is positive,
/// weighted by it; over all pixels when `weight` is null.
double mean_luminance(const Image& image, const Image* weight = nullptr);

}  // namespace acav::imaging
