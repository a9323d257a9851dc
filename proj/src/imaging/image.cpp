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

#include "acav/imaging/image.hpp"

#include "acav/core/error.hpp"

namespace acav::imaging {

Image::Image(std::size_t h, std::size_t w, std::size_t c, float fill)
    : height(h), width(w), channels(c), pixels(h * w * c, fill) {
  if (h == 0 || w == 0 || (c != 1 && c != 3)) throw ShapeError("image needs positive size and 1 or 3 channels");
}

Image::Image(std::size_t h, std::size_t w, std::size_t c, std::vector<float> px)
    : height(h), width(w), channels(c), pixels(std::move(px)) {
  if (h == 0 || w == 0 || (c != 1 && c != 3)) throw ShapeError("image needs positive size and 1 or 3 channels");
  if (pixels.size() != h * w * c) throw ShapeError("image pixel count does not match its dimensions");
}

double Image::luminance(std::size_t r, std::size_t col) const {
  if (channels == 1) return at(r, col);
  return 0.299 * at(r, col, 0) + 0.587 * at(r, col, 1) + 0.114 * at(r, col, 2);
}

Tensor<float> to_tensor(const Image& image) {
  Tensor<float> t({image.channels, image.height, image.width});
  for (std::size_t c = 0; c < image.channels; ++c)
    for (std::size_t r = 0; r < image.height; ++r)
      for (std::size_t x = 0; x < image.width; ++x)
        t[(c * image.height + r) * image.width + x] = static_cast<float>(2.0 * image.at(r, x, c) - 1.0);
  return t;
}

double mean_luminance(const Image& image, const Image* weight) {
  double sum = 0.0, wsum = 0.0;
  for (std::size_t r = 0; r < image.height; ++r) {
    for (std::size_t x = 0; x < image.width; ++x) {
      const double w = weight ? weight->at(r, x) : 1.0;
      if (w <= 0.0) continue;
      sum += w * image.luminance(r, x);
      wsum += w;
    }
  }
  return wsum > 0.0 ? sum / wsum : 0.0;
}

}  // namespace acav::imaging
