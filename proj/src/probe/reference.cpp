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

#include "acav/probe/reference.hpp"

#include <exception>

#include "acav/core/error.hpp"
#include "acav/probe/metrics.hpp"

namespace acav::probe {
namespace {

struct Evaluated {
  Decision decision = Decision::abstain;
  std::vector<std::vector<double>> activations;  // one per requested layer
};

std::vector<Evaluated> evaluate(const nn::Model& model, std::span<const Tensor<float>> inputs,
                                std::span<const std::size_t> layers, double margin) {
  for (std::size_t l : layers) {
    if (l >= model.layer_count()) throw ProbeError("probe layer " + std::to_string(l) + " out of range");
  }
  std::vector<Evaluated> out(inputs.size());
  std::vector<std::exception_ptr> failures(inputs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(inputs.size()); ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      const auto trace = model.forward_trace(inputs[i]);
      out[i].decision = classify_confident(static_cast<double>(trace.probabilities()[0]), margin);
      for (std::size_t l : layers) {
        const auto& a = trace.outputs[l];
        out[i].activations.emplace_back(a.values().begin(), a.values().end());
      }
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return out;
}

Decision expected(synth::Label label) {
  return label == synth::Label::healthy ? Decision::healthy : Decision::diseased;
}

ReferenceVector mean_of(const std::vector<Evaluated>& evals, std::span<const synth::Label> labels,
                        synth::Label label, std::size_t slot, std::size_t layer) {
  ReferenceVector ref;
  ref.label = label;
  ref.layer = layer;
  for (std::size_t i = 0; i < evals.size(); ++i) {
    if (labels[i] != label || evals[i].decision != expected(label)) continue;
    const auto& a = evals[i].activations[slot];
    if (ref.values.empty()) ref.values.assign(a.size(), 0.0);
    for (std::size_t j = 0; j < a.size(); ++j) ref.values[j] += a[j];
    ++ref.count;
  }
  if (ref.count == 0) {
    throw EmptyReferenceError("no " + synth::to_string(label) + " sample is classified correctly and confidently; "
                              "train longer or enlarge the reference set");
  }
  for (double& v : ref.values) v /= static_cast<double>(ref.count);
  return ref;
}

}  // namespace

ReferenceVector reference_vector(const nn::Model& model, std::span<const Tensor<float>> inputs,
                                 std::span<const synth::Label> labels, synth::Label label, std::size_t layer,
                                 double margin) {
  if (inputs.size() != labels.size()) throw DimensionError("reference_vector: one label per input required");
  const std::size_t layers[] = {layer};
  const auto evals = evaluate(model, inputs, layers, margin);
  return mean_of(evals, labels, label, 0, layer);
}

std::map<std::size_t, LayerReferences> build_references(const nn::Model& model,
                                                        std::span<const Tensor<float>> inputs,
                                                        std::span<const synth::Label> labels,
                                                        std::span<const std::size_t> layers, double margin) {
  if (inputs.size() != labels.size()) throw DimensionError("build_references: one label per input required");
  const auto evals = evaluate(model, inputs, layers, margin);
  std::map<std::size_t, LayerReferences> out;
  for (std::size_t s = 0; s < layers.size(); ++s) {
    out[layers[s]] = {mean_of(evals, labels, synth::Label::healthy, s, layers[s]),
                      mean_of(evals, labels, synth::Label::diseased, s, layers[s])};
  }
  return out;
}

}  // namespace acav::probe
