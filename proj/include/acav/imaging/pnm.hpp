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

#include <cstdint>
#include <filesystem>
#include <vector>

#include "acav/imaging/image.hpp"

namespace acav::imaging {

/// Binary PGM (P5) for one channel, PPM (P6) for three; maxval 255.
/// Values are quantized as round(v * 255) and read back as v / 255.
std::vector<std::uint8_t> encode_pnm(const Image& image);
Image decode_pnm(const std::vector<std::uint8_t>& bytes);

void save_image(const Image& image, const std::filesystem::path& path);
Image load_image(const std::filesystem::path& path);

}  // namespace acav::imaging
