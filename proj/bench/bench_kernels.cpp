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

// Times the OpenMP kernels against the serial reference implementations.
// Usage: bench_kernels [repetitions]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "acav/core/rng.hpp"
#include "acav/nn/kernels.hpp"
#include "acav/nn/model.hpp"
#include "acav/nn/reference.hpp"

namespace {

using Clock = std::chrono::steady_clock;

acav::Tensor<float> random_tensor(const acav::Shape& shape, acav::Rng& rng) {
  acav::Tensor<float> t(shape);
  for (auto& v : t.values()) v = static_cast<float>(rng.normal());
  return t;
}

template <typename F>
double time_ms(int reps, F&& f) {
  const auto start = Clock::now();
  for (int i = 0; i < reps; ++i) f();
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count() / reps;
}

struct ConvCase {
  const char* name;
  acav::Shape in;
  acav::Shape weight;
};

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 20;
  acav::Rng rng(7);
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-22s %12s %12s %8s %6s\n", "kernel", "serial_ms", "openmp_ms", "speedup", "equal");

  const ConvCase cases[] = {
      {"conv 3x64x64 -> 8", {3, 64, 64}, {8, 3, 3, 3}},
      {"conv 8x31x31 -> 16", {8, 31, 31}, {16, 8, 3, 3}},
      {"conv 16x14x14 -> 16", {16, 14, 14}, {16, 16, 3, 3}},
  };
  for (const auto& c : cases) {
    const auto in = random_tensor(c.in, rng);
    const auto w = random_tensor(c.weight, rng);
    const auto b = random_tensor({c.weight[0]}, rng);
    acav::Tensor<float> slow, fast;
    const double ts = time_ms(reps, [&] { slow = acav::nn::reference::conv2d_forward(in, w, b); });
    const double tf = time_ms(reps, [&] { fast = acav::nn::kernels::conv2d_forward(in, w, b); });
    const bool equal = std::memcmp(slow.data(), fast.data(), slow.size() * sizeof(float)) == 0;
    std::printf("%-22s %12.3f %12.3f %8.2f %6s\n", c.name, ts, tf, ts / tf, equal ? "yes" : "no");
  }

  {
    const auto in = random_tensor({576}, rng);
    const auto w = random_tensor({128, 576}, rng);
    const auto b = random_tensor({128}, rng);
    acav::Tensor<float> slow, fast;
    const double ts = time_ms(reps * 10, [&] { slow = acav::nn::reference::dense_forward(in, w, b); });
    const double tf = time_ms(reps * 10, [&] { fast = acav::nn::kernels::dense_forward(in, w, b); });
    const bool equal = std::memcmp(slow.data(), fast.data(), slow.size() * sizeof(float)) == 0;
    std::printf("%-22s %12.3f %12.3f %8.2f %6s\n", "dense 576 -> 128", ts, tf, ts / tf, equal ? "yes" : "no");
  }

  const auto model = acav::nn::make_classifier(3, 64, 64, 1);
  std::vector<acav::Tensor<float>> batch;
  for (int i = 0; i < 32; ++i) batch.push_back(random_tensor({3, 64, 64}, rng));
  const int batch_reps = reps > 4 ? reps / 4 : 1;
  const double serial = time_ms(batch_reps, [&] {
    for (const auto& x : batch) (void)model.forward(x);
  });
  const double parallel = time_ms(batch_reps, [&] { (void)acav::nn::forward_batch<float>(model, batch); });
  std::printf("%-22s %12.3f %12.3f %8.2f %6s\n", "forward batch of 32", serial, parallel, serial / parallel, "-");
  return 0;
}
