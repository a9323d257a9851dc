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
#include <string>

#include "acav/core/tensor.hpp"

namespace acav::nn {

enum class LayerKind : std::uint32_t {
  conv2d = 1,
  relu = 2,
  maxpool2x2 = 3,
  flatten = 4,
  dense = 5,
  softmax = 6,
};

std::string to_string(LayerKind kind);

/// One entry of a layer stack. Only the fields relevant to `kind` are used.
struct LayerSpec {
  LayerKind kind = LayerKind::relu;
  // conv2d: [in_channels, out_channels, kernel_h, kernel_w]
  // dense:  [in_units, out_units]; in_units 0 means "infer from input shape"
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  std::size_t kernel_h = 0;
  std::size_t kernel_w = 0;

  static LayerSpec conv2d(std::size_t in_ch, std::size_t out_ch, std::size_t kh, std::size_t kw) {
    return {LayerKind::conv2d, in_ch, out_ch, kh, kw};
  }
  static LayerSpec dense(std::size_t in_units, std::size_t out_units) {
    return {LayerKind::dense, in_units, out_units, 0, 0};
  }
  static LayerSpec relu() { return {LayerKind::relu}; }
  static LayerSpec maxpool2x2() { return {LayerKind::maxpool2x2}; }
  static LayerSpec flatten() { return {LayerKind::flatten}; }
  static LayerSpec softmax() { return {LayerKind::softmax}; }

  bool has_parameters() const { return kind == LayerKind::conv2d || kind == LayerKind::dense; }

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// Output shape of `spec` applied to `in`; throws ShapeError when incompatible.
Shape infer_output_shape(const LayerSpec& spec, const Shape& in);

}  // namespace acav::nn
