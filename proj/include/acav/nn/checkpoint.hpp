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
#include <string>
#include <vector>

#include "acav/nn/model.hpp"

namespace acav::nn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct TrainingMetadata {
  std::uint64_t seed = 0;
  std::uint64_t epochs = 0;
  double final_loss = 0.0;
};

struct Checkpoint {
  Model model;
  TrainingMetadata metadata;
  std::uint32_t penultimate_width = 0;  // as recorded in the file
};

/// Binary layout (all integers little-endian):
///   "ACAV" | u32 version | u32 rank, u32 dims[rank] (input shape)
///   | u32 layer count | per layer: u32 kind, u32 in, u32 out, u32 kh, u32 kw
///   | u32 penultimate index | u32 penultimate width
///   | u64 seed | u64 epochs | f64 final loss
///   | u32 tensor count | per tensor: u64 element count, f32 values[count]
/// See docs/checkpoint-format.md.
std::vector<std::uint8_t> encode_checkpoint(const Model& model, const TrainingMetadata& meta);
Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(const Model& model, const TrainingMetadata& meta, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace acav::nn
