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

#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <cstring>

#include "acav/core/error.hpp"
#include "acav/core/rng.hpp"
#include "acav/nn/checkpoint.hpp"
#include "acav/nn/gradcheck.hpp"
#include "acav/nn/kernels.hpp"
#include "acav/nn/model.hpp"
#include "acav/nn/reference.hpp"
#include "acav/nn/selftest.hpp"
#include "acav/nn/train.hpp"
#include "support/oracles.hpp"

using namespace acav;
using namespace acav::nn;

namespace {

template <typename T>
Tensor<T> random_tensor(const Shape& shape, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  const auto v = testing::random_vector(shape_volume(shape), seed, lo, hi);
  Tensor<T> t(shape);
  for (std::size_t i = 0; i < v.size(); ++i) t[i] = static_cast<T>(v[i]);
  return t;
}

bool bit_equal(const Tensor<float>& a, const Tensor<float>& b) {
  return a.shape() == b.shape() && std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0;
}

Model tiny_conv_model(std::uint64_t seed) {
  Model m({1, 8, 8}, {LayerSpec::conv2d(1, 2, 3, 3), LayerSpec::relu(), LayerSpec::flatten(), LayerSpec::dense(0, 2),
                      LayerSpec::softmax()});
  m.initialize(seed);
  auto params = m.parameters();
  Rng rng(seed + 1);
  for (auto* p : params) {
    if (p->rank() == 1) {
      for (auto& v : p->values()) v = static_cast<float>(rng.uniform(-0.3, 0.3));
    }
  }
  return m;
}

TrainingSet blobs(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  TrainingSet set;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t y = i % 2;
    const double c = y == 0 ? -1.0 : 1.0;
    set.inputs.push_back(Tensor<float>({2}, {static_cast<float>(c + 0.3 * rng.normal()),
                                             static_cast<float>(c + 0.3 * rng.normal())}));
    set.labels.push_back(y);
  }
  return set;
}

Model blob_model(std::uint64_t seed) {
  Model m({2}, {LayerSpec::dense(2, 8), LayerSpec::relu(), LayerSpec::dense(8, 2), LayerSpec::softmax()});
  m.initialize(seed);
  return m;
}

}  // namespace

TEST_SUITE("nn") {
  TEST_CASE("forward of a conv/dense toy model matches a per-neuron evaluation") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const Model m = tiny_conv_model(seed);
      const auto x = random_tensor<float>({1, 8, 8}, seed * 31, 0.0, 1.0);
      const auto& w1 = m.layer(0).weight;
      const auto& b1 = m.layer(0).bias;
      std::vector<double> hidden;
      for (std::size_t o = 0; o < 2; ++o) {
        for (std::size_t r = 0; r < 6; ++r) {
          for (std::size_t c = 0; c < 6; ++c) {
            std::vector<double> w, in;
            for (std::size_t ky = 0; ky < 3; ++ky) {
              for (std::size_t kx = 0; kx < 3; ++kx) {
                w.push_back(w1[(o * 3 + ky) * 3 + kx]);
                in.push_back(x[(r + ky) * 8 + c + kx]);
              }
            }
            hidden.push_back(testing::relu_neuron(w, in, b1[o]));
          }
        }
      }
      const auto& w2 = m.layer(3).weight;
      const auto& b2 = m.layer(3).bias;
      double z[2];
      for (std::size_t k = 0; k < 2; ++k) {
        std::vector<double> w(w2.values().begin() + static_cast<long>(k * 72),
                              w2.values().begin() + static_cast<long>((k + 1) * 72));
        z[k] = testing::linear_neuron(w, hidden, b2[k]);
      }
      const double mz = std::max(z[0], z[1]);
      const double e0 = std::exp(z[0] - mz), e1 = std::exp(z[1] - mz);

      const auto trace = m.forward_trace(x);
      for (std::size_t i = 0; i < hidden.size(); ++i) REQUIRE(trace.outputs[1][i] == doctest::Approx(hidden[i]).epsilon(1e-6));
      REQUIRE(trace.outputs[3][0] == doctest::Approx(z[0]).epsilon(1e-6));
      const auto p = m.forward(x);
      CHECK(std::abs(p[0] - e0 / (e0 + e1)) < 1e-6);
      CHECK(std::abs(p[1] - e1 / (e0 + e1)) < 1e-6);
    }
  }

  TEST_CASE("every dense layer of the classifier matches the scalar formula") {
    const Model m = make_classifier(3, 64, 64, 5);
    const auto x = random_tensor<float>({3, 64, 64}, 9, -1.0, 1.0);
    const auto trace = m.forward_trace(x);
    for (std::size_t l = 0; l < m.layer_count(); ++l) {
      if (m.layer(l).spec.kind != LayerKind::dense) continue;
      const auto& in = trace.outputs[l - 1];
      const auto& w = m.layer(l).weight;
      const auto& b = m.layer(l).bias;
      const std::size_t n_in = in.size();
      std::vector<double> xin(in.values().begin(), in.values().end());
      for (std::size_t i = 0; i < w.dim(0); ++i) {
        std::vector<double> row(w.values().begin() + static_cast<long>(i * n_in),
                                w.values().begin() + static_cast<long>((i + 1) * n_in));
        REQUIRE(trace.outputs[l][i] == doctest::Approx(testing::linear_neuron(row, xin, b[i])).epsilon(1e-6));
      }
    }
  }

  TEST_CASE("softmax output is a distribution") {
    const Model m = make_classifier(1, 64, 64, 3);
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto p = m.forward(random_tensor<float>({1, 64, 64}, s, -1.0, 1.0));
      REQUIRE(p.size() == 2);
      CHECK(std::abs(static_cast<double>(p[0]) + p[1] - 1.0) < 1e-6);
      CHECK(p[0] >= 0.0f);
      CHECK(p[1] <= 1.0f);
    }
    Model big({2}, {LayerSpec::dense(2, 2), LayerSpec::softmax()});
    auto params = big.parameters();
    (*params[0])[0] = 1e4f;
    const auto p = big.forward(Tensor<float>({2}, {50.0f, -50.0f}));
    CHECK(std::isfinite(p[0]));
    CHECK(std::abs(static_cast<double>(p[0]) + p[1] - 1.0) < 1e-6);
  }

  TEST_CASE("zero weights give equal probabilities") {
    const Model m({3, 64, 64}, make_classifier(3, 64, 64, 1).specs());
    const auto p = m.forward(random_tensor<float>({3, 64, 64}, 4, 0.0, 1.0));
    CHECK(p[0] == 0.5f);
    CHECK(p[1] == 0.5f);
  }

  TEST_CASE("input shape mismatch is rejected") {
    const Model m = make_classifier(3, 64, 64, 1);
    CHECK_THROWS_AS(m.forward(Tensor<float>({1, 64, 64})), ShapeError);
    CHECK_THROWS_AS(Model({3, 64, 64}, {LayerSpec::flatten(), LayerSpec::dense(0, 3), LayerSpec::softmax()}),
                    ShapeError);
  }

  TEST_CASE("probe points of the classifier") {
    const Model m = make_classifier(3, 64, 64, 1);
    const auto x = random_tensor<float>({3, 64, 64}, 2, 0.0, 1.0);
    const auto n1 = m.forward_probed(x, m.penultimate_index());
    CHECK(n1.activation.values.size() == 64);
    CHECK(m.forward_probed(x, m.hidden_probe_index(2)).activation.values.size() == 128);
    CHECK(bit_equal(n1.probabilities, m.forward(x)));
    const auto again = m.forward_probed(x, m.penultimate_index());
    CHECK(again.activation.values == n1.activation.values);
    const auto last = m.forward_probed(x, m.layer_count() - 1);
    REQUIRE(last.activation.values.size() == 2);
    CHECK(last.activation.values[0] == static_cast<double>(last.probabilities[0]));
    CHECK(last.activation.values[1] == static_cast<double>(last.probabilities[1]));
    CHECK_THROWS_AS(m.forward_probed(x, m.layer_count()), ProbeError);
  }

  TEST_CASE("conv kernel equals the serial reference bit for bit") {
    const auto r = conv_oracle_suite(99, 100);
    CHECK(r.cases == 100);
    CHECK(r.mismatches == 0);
  }

  TEST_CASE("conv reference agrees with an independent loop") {
    const auto in = random_tensor<double>({2, 7, 6}, 1);
    const auto w = random_tensor<double>({3, 2, 3, 2}, 2);
    const auto b = random_tensor<double>({3}, 3);
    const auto out = reference::conv2d_forward(in, w, b);
    REQUIRE(out.shape() == Shape{3, 5, 5});
    for (std::size_t o = 0; o < 3; ++o) {
      for (std::size_t r = 0; r < 5; ++r) {
        for (std::size_t c = 0; c < 5; ++c) {
          std::vector<double> wv, xv;
          for (std::size_t ch = 0; ch < 2; ++ch)
            for (std::size_t ky = 0; ky < 3; ++ky)
              for (std::size_t kx = 0; kx < 2; ++kx) {
                wv.push_back(w[((o * 2 + ch) * 3 + ky) * 2 + kx]);
                xv.push_back(in[(ch * 7 + r + ky) * 6 + c + kx]);
              }
          CHECK(out[(o * 5 + r) * 5 + c] == doctest::Approx(testing::linear_neuron(wv, xv, b[o])).epsilon(1e-12));
        }
      }
    }
  }

  TEST_CASE("dense and max-pool kernels equal their references") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto x = random_tensor<float>({37}, s);
      const auto w = random_tensor<float>({11, 37}, s + 100);
      const auto b = random_tensor<float>({11}, s + 200);
      CHECK(bit_equal(kernels::dense_forward(x, w, b), reference::dense_forward(x, w, b)));
      const auto img = random_tensor<float>({3, 9, 8}, s + 300);
      std::vector<std::size_t> argmax;
      CHECK(bit_equal(kernels::maxpool2x2_forward(img, &argmax), reference::maxpool2x2_forward(img)));
      CHECK(argmax.size() == 3 * 4 * 4);
    }
  }

  TEST_CASE("analytic gradients match central differences") {
    const auto r = gradient_suite(7, 30);
    CHECK(r.models == 30);
    CHECK(r.checked > 0);
    CHECK(r.failures == 0);
    CHECK(r.max_relative_error < 1e-3);
  }

  TEST_CASE("toy models respect the size limits") {
    for (std::uint64_t s = 0; s < 100; ++s) {
      const auto m = random_toy_model(s);
      std::size_t parameterized = 0;
      for (std::size_t i = 0; i < m.layer_count(); ++i) parameterized += m.layer(i).spec.has_parameters();
      CHECK(parameterized <= 3);
      CHECK(m.parameter_count() <= 500);
    }
  }

  TEST_CASE("gradient of a perfectly predicted target vanishes at the output bias") {
    const Model m = make_classifier(1, 64, 64, 8);
    const auto x = random_tensor<float>({1, 64, 64}, 1, 0.0, 1.0);
    const auto p = m.forward(x);
    const std::vector<double> target = {p[0], p[1]};
    const auto g = m.backward(x, target);
    const auto& bias_grad = g.tensors.back();
    REQUIRE(bias_grad.size() == 2);
    CHECK(bias_grad[0] == 0.0f);
    CHECK(bias_grad[1] == 0.0f);
  }

  TEST_CASE("duplicated sample in a batch gives the single-sample gradient") {
    const Model m = make_classifier(1, 64, 64, 2);
    const auto x = random_tensor<float>({1, 64, 64}, 3, 0.0, 1.0);
    const auto single = m.backward(x, std::size_t{1});
    const std::vector<Tensor<float>> batch = {x, x};
    const std::vector<std::size_t> labels = {1, 1};
    const auto twice = batch_gradient<float>(m, batch, labels);
    REQUIRE(twice.tensors.size() == single.tensors.size());
    for (std::size_t t = 0; t < single.tensors.size(); ++t) CHECK(bit_equal(twice.tensors[t], single.tensors[t]));
    CHECK(twice.loss == doctest::Approx(single.loss).epsilon(1e-12));
  }

  TEST_CASE("batch results do not depend on the thread count") {
    const Model m = make_classifier(3, 64, 64, 4);
    std::vector<Tensor<float>> xs;
    std::vector<std::size_t> ys;
    for (std::uint64_t s = 0; s < 6; ++s) {
      xs.push_back(random_tensor<float>({3, 64, 64}, s, 0.0, 1.0));
      ys.push_back(s % 2);
    }
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto g1 = batch_gradient<float>(m, xs, ys);
    const auto f1 = forward_batch<float>(m, xs);
    omp_set_num_threads(4);
    const auto g4 = batch_gradient<float>(m, xs, ys);
    const auto f4 = forward_batch<float>(m, xs);
    omp_set_num_threads(saved);
    for (std::size_t t = 0; t < g1.tensors.size(); ++t) CHECK(bit_equal(g1.tensors[t], g4.tensors[t]));
    for (std::size_t i = 0; i < xs.size(); ++i) {
      CHECK(bit_equal(f1[i], f4[i]));
      CHECK(bit_equal(f1[i], m.forward(xs[i])));
    }
  }

  TEST_CASE("training separates two blobs") {
    const auto data = blobs(100, 1);
    const auto result = train(blob_model(3), data, {0.1, 60, 10, 17});
    CHECK(result.loss_history.size() == 60);
    CHECK(accuracy(result.model, data) >= 0.95);
  }

  TEST_CASE("zero epochs leave the model unchanged") {
    const auto data = blobs(20, 2);
    const Model m = blob_model(4);
    const auto result = train(m, data, {0.1, 0, 10, 1});
    CHECK(result.loss_history.empty());
    const auto a = m.parameters();
    const auto b = result.model.parameters();
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(*a[i] == *b[i]);
  }

  TEST_CASE("training is deterministic") {
    const auto data = blobs(40, 3);
    const auto r1 = train(blob_model(5), data, {0.05, 5, 8, 99});
    const auto r2 = train(blob_model(5), data, {0.05, 5, 8, 99});
    CHECK(r1.loss_history == r2.loss_history);
    const auto a = r1.model.parameters();
    const auto b = r2.model.parameters();
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(*a[i] == *b[i]);
    const auto r3 = train(blob_model(5), data, {0.05, 5, 8, 100});
    CHECK(r3.loss_history != r1.loss_history);
  }

  TEST_CASE("invalid training configs are rejected") {
    const auto data = blobs(20, 4);
    CHECK_THROWS_AS(train(blob_model(1), data, {0.0, 1, 4, 0}), ConfigError);
    CHECK_THROWS_AS(train(blob_model(1), data, {0.1, 1, 21, 0}), ConfigError);
    CHECK_THROWS_AS(train(blob_model(1), data, {0.1, 1, 0, 0}), ConfigError);
  }

  TEST_CASE("divergence names the epoch") {
    const auto data = blobs(20, 5);
    try {
      train(blob_model(1), data, {1e30, 3, 4, 0});
      FAIL("expected divergence");
    } catch (const TrainingDivergedError& e) {
      CHECK(e.epoch() == 0);
      CHECK(std::string(e.what()).find("epoch") != std::string::npos);
    }
  }

  TEST_CASE("checkpoint round trip is exact") {
    const Model m = make_classifier(3, 64, 64, 12);
    const auto bytes = encode_checkpoint(m, {12, 3, 0.25});
    const auto ck = decode_checkpoint(bytes);
    CHECK(ck.penultimate_width == 64);
    CHECK(ck.metadata.seed == 12);
    CHECK(ck.metadata.epochs == 3);
    CHECK(ck.metadata.final_loss == 0.25);
    CHECK(ck.model.specs() == m.specs());
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto x = random_tensor<float>({3, 64, 64}, s, 0.0, 1.0);
      CHECK(bit_equal(ck.model.forward(x), m.forward(x)));
    }
    testing::TempDir dir("ckpt");
    save_checkpoint(m, {1, 2, 3.0}, dir / "m.ckpt");
    CHECK(load_checkpoint(dir / "m.ckpt").model.specs() == m.specs());
    CHECK_THROWS_AS(load_checkpoint(dir / "missing.ckpt"), IoError);
  }

  TEST_CASE("corrupt checkpoints are rejected") {
    const auto bytes = encode_checkpoint(make_classifier(1, 64, 64, 1), {});
    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    CHECK_THROWS_AS(decode_checkpoint(bad_magic), FormatError);
    auto truncated = bytes;
    truncated.resize(bytes.size() - 3);
    CHECK_THROWS_AS(decode_checkpoint(truncated), FormatError);
    auto trailing = bytes;
    trailing.push_back(0);
    CHECK_THROWS_AS(decode_checkpoint(trailing), FormatError);
    auto version = bytes;
    version[4] = 9;
    CHECK_THROWS_AS(decode_checkpoint(version), VersionError);
    CHECK_THROWS_AS(decode_checkpoint({}), FormatError);
  }
}
