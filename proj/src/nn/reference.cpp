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

#include "acav/nn/reference.hpp"

namespace acav::nn::reference {

template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& bias) {
  const std::size_t C = in.dim(0), H = in.dim(1), W = in.dim(2);
  const std::size_t O = weight.dim(0), KH = weight.dim(2), KW = weight.dim(3);
  if (weight.dim(1) != C || KH > H || KW > W || bias.size() != O) {
    throw ShapeError("reference conv2d: incompatible shapes");
  }
  const std::size_t OH = H - KH + 1, OW = W - KW + 1;
  Tensor<T> out({O, OH, OW});
  for (std::size_t o = 0; o < O; ++o)
    for (std::size_t y = 0; y < OH; ++y)
      for (std::size_t x = 0; x < OW; ++x) {
        double acc = 0.0;
        for (std::size_t c = 0; c < C; ++c)
          for (std::size_t ky = 0; ky < KH; ++ky)
            for (std::size_t kx = 0; kx < KW; ++kx)
              acc += static_cast<double>(weight[((o * C + c) * KH + ky) * KW + kx]) *
                     static_cast<double>(in[(c * H + y + ky) * W + x + kx]);
        out[(o * OH + y) * OW + x] = static_cast<T>(acc + static_cast<double>(bias[o]));
      }
  return out;
}

template <typename T>
Tensor<T> dense_forward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& bias) {
  const std::size_t N = weight.dim(0), M = weight.dim(1);
  if (in.size() != M || bias.size() != N) throw ShapeError("reference dense: incompatible shapes");
  Tensor<T> out({N});
  for (std::size_t i = 0; i < N; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < M; ++j)
      acc += static_cast<double>(weight[i * M + j]) * static_cast<double>(in[j]);
    out[i] = static_cast<T>(acc + static_cast<double>(bias[i]));
  }
  return out;
}

template <typename T>
Tensor<T> maxpool2x2_forward(const Tensor<T>& in) {
  const std::size_t C = in.dim(0), H = in.dim(1), W = in.dim(2);
  Tensor<T> out({C, H / 2, W / 2});
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t y = 0; y < H / 2; ++y)
      for (std::size_t x = 0; x < W / 2; ++x) {
        T m = in[(c * H + 2 * y) * W + 2 * x];
        for (std::size_t dy = 0; dy < 2; ++dy)
          for (std::size_t dx = 0; dx < 2; ++dx) m = std::max(m, in[(c * H + 2 * y + dy) * W + 2 * x + dx]);
        out[(c * (H / 2) + y) * (W / 2) + x] = m;
      }
  return out;
}

template Tensor<float> conv2d_forward(const Tensor<float>&, const Tensor<float>&, const Tensor<float>&);
template Tensor<double> conv2d_forward(const Tensor<double>&, const Tensor<double>&, const Tensor<double>&);
template Tensor<float> dense_forward(const Tensor<float>&, const Tensor<float>&, const Tensor<float>&);
template Tensor<double> dense_forward(const Tensor<double>&, const Tensor<double>&, const Tensor<double>&);
template Tensor<float> maxpool2x2_forward(const Tensor<float>&);
template Tensor<double> maxpool2x2_forward(const Tensor<double>&);

}  // namespace acav::nn::reference
