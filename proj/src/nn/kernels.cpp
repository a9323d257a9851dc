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

#include "acav/nn/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace acav::nn::kernels {
namespace {

constexpr std::size_t kParallelWork = 1 << 14;

void require_rank(const Shape& s, std::size_t rank, const char* what) {
  if (s.size() != rank) throw ShapeError(std::string(what) + ": expected rank " + std::to_string(rank) +
                                         ", got " + shape_string(s));
}

}  // namespace

template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& bias) {
  require_rank(in.shape(), 3, "conv2d input");
  require_rank(weight.shape(), 4, "conv2d weight");
  const std::size_t C = in.dim(0), H = in.dim(1), W = in.dim(2);
  const std::size_t O = weight.dim(0), KH = weight.dim(2), KW = weight.dim(3);
  if (weight.dim(1) != C || KH > H || KW > W || bias.size() != O) {
    throw ShapeError("conv2d: input " + shape_string(in.shape()) + " incompatible with weight " +
                     shape_string(weight.shape()));
  }
  const std::size_t OH = H - KH + 1, OW = W - KW + 1;
  Tensor<T> out({O, OH, OW});
  const T* src = in.data();
  const T* wts = weight.data();
  T* dst = out.data();
  const auto n_out = static_cast<std::ptrdiff_t>(O);

#pragma omp parallel for schedule(static) if (O * OH * OW * C * KH * KW > kParallelWork)
  for (std::ptrdiff_t oi = 0; oi < n_out; ++oi) {
    const auto o = static_cast<std::size_t>(oi);
    std::vector<double> acc(OW);
    const double b = static_cast<double>(bias[o]);
    for (std::size_t y = 0; y < OH; ++y) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t c = 0; c < C; ++c) {
        for (std::size_t ky = 0; ky < KH; ++ky) {
          const T* row = src + (c * H + y + ky) * W;
          const T* wrow = wts + ((o * C + c) * KH + ky) * KW;
          for (std::size_t kx = 0; kx < KW; ++kx) {
            const double w = static_cast<double>(wrow[kx]);
            const T* s = row + kx;
            for (std::size_t x = 0; x < OW; ++x) acc[x] += w * static_cast<double>(s[x]);
          }
        }
      }
      T* drow = dst + (o * OH + y) * OW;
      for (std::size_t x = 0; x < OW; ++x) drow[x] = static_cast<T>(acc[x] + b);
    }
  }
  return out;
}

template <typename T>
void conv2d_backward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& grad_out,
                     Tensor<T>& grad_weight, Tensor<T>& grad_bias, Tensor<T>* grad_in) {
  const std::size_t C = in.dim(0), H = in.dim(1), W = in.dim(2);
  const std::size_t O = weight.dim(0), KH = weight.dim(2), KW = weight.dim(3);
  const std::size_t OH = grad_out.dim(1), OW = grad_out.dim(2);
  const T* src = in.data();
  const T* g = grad_out.data();
  const bool parallel = O * OH * OW * C * KH * KW > kParallelWork;

#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t oi = 0; oi < static_cast<std::ptrdiff_t>(O); ++oi) {
    const auto o = static_cast<std::size_t>(oi);
    const T* go = g + o * OH * OW;
    double bsum = 0.0;
    for (std::size_t i = 0; i < OH * OW; ++i) bsum += static_cast<double>(go[i]);
    grad_bias[o] = static_cast<T>(bsum);
    for (std::size_t c = 0; c < C; ++c) {
      for (std::size_t ky = 0; ky < KH; ++ky) {
        for (std::size_t kx = 0; kx < KW; ++kx) {
          double acc = 0.0;
          for (std::size_t y = 0; y < OH; ++y) {
            const T* s = src + (c * H + y + ky) * W + kx;
            const T* gy = go + y * OW;
            for (std::size_t x = 0; x < OW; ++x)
              acc += static_cast<double>(gy[x]) * static_cast<double>(s[x]);
          }
          grad_weight[((o * C + c) * KH + ky) * KW + kx] = static_cast<T>(acc);
        }
      }
    }
  }

  if (grad_in == nullptr) return;
  const T* wts = weight.data();
  T* gi = grad_in->data();
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t ci = 0; ci < static_cast<std::ptrdiff_t>(C); ++ci) {
    const auto c = static_cast<std::size_t>(ci);
    std::vector<double> acc(H * W, 0.0);
    for (std::size_t o = 0; o < O; ++o) {
      const T* go = g + o * OH * OW;
      for (std::size_t ky = 0; ky < KH; ++ky) {
        for (std::size_t kx = 0; kx < KW; ++kx) {
          const double w = static_cast<double>(wts[((o * C + c) * KH + ky) * KW + kx]);
          for (std::size_t y = 0; y < OH; ++y) {
            double* a = acc.data() + (y + ky) * W + kx;
            const T* gy = go + y * OW;
            for (std::size_t x = 0; x < OW; ++x) a[x] += w * static_cast<double>(gy[x]);
          }
        }
      }
    }
    for (std::size_t i = 0; i < H * W; ++i) gi[c * H * W + i] = static_cast<T>(acc[i]);
  }
}

template <typename T>
Tensor<T> dense_forward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& bias) {
  const std::size_t N = weight.dim(0), M = weight.dim(1);
  if (in.size() != M || bias.size() != N) {
    throw ShapeError("dense: input of " + std::to_string(in.size()) + " values incompatible with weight " +
                     shape_string(weight.shape()));
  }
  Tensor<T> out({N});
  const T* x = in.data();
  const T* w = weight.data();
#pragma omp parallel for schedule(static) if (N * M > kParallelWork)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(N); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const T* wr = w + i * M;
    double acc = 0.0;
    for (std::size_t j = 0; j < M; ++j) acc += static_cast<double>(wr[j]) * static_cast<double>(x[j]);
    out[i] = static_cast<T>(acc + static_cast<double>(bias[i]));
  }
  return out;
}

template <typename T>
void dense_backward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& grad_out,
                    Tensor<T>& grad_weight, Tensor<T>& grad_bias, Tensor<T>* grad_in) {
  const std::size_t N = weight.dim(0), M = weight.dim(1);
  const T* x = in.data();
  const T* g = grad_out.data();
  for (std::size_t i = 0; i < N; ++i) {
    grad_bias[i] = g[i];
    T* gw = grad_weight.data() + i * M;
    const double gi = static_cast<double>(g[i]);
    for (std::size_t j = 0; j < M; ++j) gw[j] = static_cast<T>(gi * static_cast<double>(x[j]));
  }
  if (grad_in == nullptr) return;
  std::vector<double> acc(M, 0.0);
  const T* w = weight.data();
  for (std::size_t i = 0; i < N; ++i) {
    const double gi = static_cast<double>(g[i]);
    const T* wr = w + i * M;
    for (std::size_t j = 0; j < M; ++j) acc[j] += gi * static_cast<double>(wr[j]);
  }
  for (std::size_t j = 0; j < M; ++j) (*grad_in)[j] = static_cast<T>(acc[j]);
}

template <typename T>
Tensor<T> relu_forward(const Tensor<T>& in) {
  Tensor<T> out = in;
  for (T& v : out.values()) v = v > T{0} ? v : T{0};
  return out;
}

template <typename T>
Tensor<T> relu_backward(const Tensor<T>& in, const Tensor<T>& grad_out) {
  Tensor<T> out = grad_out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(in[i] > T{0})) out[i] = T{0};
  }
  return out;
}

template <typename T>
Tensor<T> maxpool2x2_forward(const Tensor<T>& in, std::vector<std::size_t>* argmax) {
  require_rank(in.shape(), 3, "maxpool2x2 input");
  const std::size_t C = in.dim(0), H = in.dim(1), W = in.dim(2);
  if (H < 2 || W < 2) throw ShapeError("maxpool2x2: input " + shape_string(in.shape()) + " too small");
  const std::size_t OH = H / 2, OW = W / 2;
  Tensor<T> out({C, OH, OW});
  if (argmax) argmax->assign(out.size(), 0);
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t y = 0; y < OH; ++y) {
      for (std::size_t x = 0; x < OW; ++x) {
        // First maximum in row-major window order wins ties.
        std::size_t best = (c * H + 2 * y) * W + 2 * x;
        for (std::size_t dy = 0; dy < 2; ++dy) {
          for (std::size_t dx = 0; dx < 2; ++dx) {
            const std::size_t idx = (c * H + 2 * y + dy) * W + 2 * x + dx;
            if (in[idx] > in[best]) best = idx;
          }
        }
        const std::size_t o = (c * OH + y) * OW + x;
        out[o] = in[best];
        if (argmax) (*argmax)[o] = best;
      }
    }
  }
  return out;
}

template <typename T>
Tensor<T> maxpool2x2_backward(const Shape& in_shape, const std::vector<std::size_t>& argmax,
                              const Tensor<T>& grad_out) {
  Tensor<T> grad_in(in_shape, T{0});
  for (std::size_t o = 0; o < grad_out.size(); ++o) grad_in[argmax[o]] += grad_out[o];
  return grad_in;
}

template <typename T>
Tensor<T> softmax_forward(const Tensor<T>& in) {
  double peak = -std::numeric_limits<double>::infinity();
  for (T v : in.values()) peak = std::max(peak, static_cast<double>(v));
  std::vector<double> e(in.size());
  double total = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    e[i] = std::exp(static_cast<double>(in[i]) - peak);
    total += e[i];
  }
  Tensor<T> out(in.shape());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = static_cast<T>(e[i] / total);
  return out;
}

#define ACAV_INSTANTIATE(T)                                                                          \
  template Tensor<T> conv2d_forward(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);           \
  template void conv2d_backward(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, Tensor<T>&,    \
                                Tensor<T>&, Tensor<T>*);                                             \
  template Tensor<T> dense_forward(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);            \
  template void dense_backward(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, Tensor<T>&,     \
                               Tensor<T>&, Tensor<T>*);                                              \
  template Tensor<T> relu_forward(const Tensor<T>&);                                                 \
  template Tensor<T> relu_backward(const Tensor<T>&, const Tensor<T>&);                              \
  template Tensor<T> maxpool2x2_forward(const Tensor<T>&, std::vector<std::size_t>*);                \
  template Tensor<T> maxpool2x2_backward(const Shape&, const std::vector<std::size_t>&,              \
                                         const Tensor<T>&);                                          \
  template Tensor<T> softmax_forward(const Tensor<T>&);

ACAV_INSTANTIATE(float)
ACAV_INSTANTIATE(double)
#undef ACAV_INSTANTIATE

}  // namespace acav::nn::kernels
