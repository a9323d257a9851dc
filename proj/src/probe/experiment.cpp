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

#include "acav/probe/experiment.hpp"

#include <exception>

#include "acav/core/error.hpp"
#include "acav/core/rng.hpp"
#include "acav/imaging/compose.hpp"
#include "acav/synth/generators.hpp"

namespace acav::probe {

std::vector<ProbeLayer> probe_layers(const nn::Model& model, std::span<const std::string> names) {
  std::vector<ProbeLayer> out;
  for (const auto& name : names) {
    if (name.size() < 3 || name.rfind("n-", 0) != 0) throw ConfigError("probe layer must look like n-1, got " + name);
    std::size_t depth = 0;
    try {
      depth = std::stoul(name.substr(2));
    } catch (const std::exception&) {
      throw ConfigError("probe layer must look like n-1, got " + name);
    }
    out.push_back({model.hidden_probe_index(depth), name});
  }
  return out;
}

imaging::Image augment(const imaging::Image& image, const imaging::Image& mask, const ConceptConfig& config,
                       std::uint64_t pair_seed, const ExperimentOptions& options) {
  if (config.count == 0 || config.kinds.empty()) return image;
  std::vector<imaging::AlphaPatch> patches;
  std::size_t fh = 1, fw = 1;
  for (synth::ConceptKind kind : config.kinds) {
    for (std::size_t j = 0; j < config.count; ++j) {
      patches.push_back(synth::gen_pattern(
          kind, derive_seed(pair_seed, {static_cast<std::uint64_t>(kind), j}), config.scale));
      fh = std::max(fh, patches.back().height());
      fw = std::max(fw, patches.back().width());
    }
  }
  imaging::PlacementOptions rule = options.placement;
  rule.footprint_h = fh;
  rule.footprint_w = fw;
  const auto anchors = imaging::sample_placements(mask, patches.size(), options.min_distance,
                                                  derive_seed(pair_seed, {0x706c6163u}), rule);
  imaging::Image out = image;
  for (std::size_t k = 0; k < patches.size(); ++k) {
    const auto [cy, cx] = imaging::anchor_of(anchors[k], fh, fw);
    const imaging::Placement p{cy - patches[k].height() / 2, cx - patches[k].width() / 2, 1.0, config.intensity};
    out = imaging::compose(out, patches[k], p);
  }
  return out;
}

namespace {

struct Evaluation {
  Decision decision = Decision::abstain;
  std::vector<ActivationVector> activations;  // one per probe layer
};

Evaluation evaluate(const nn::Model& model, const imaging::Image& image, std::span<const ProbeLayer> layers,
                    double margin) {
  const auto trace = model.forward_trace(imaging::to_tensor(image));
  Evaluation e;
  e.decision = classify_confident(static_cast<double>(trace.probabilities()[0]), margin);
  for (const auto& l : layers) {
    const auto& a = trace.outputs[l.index];
    e.activations.push_back({l.index, std::vector<double>(a.values().begin(), a.values().end())});
  }
  return e;
}

template <typename F>
void parallel_for(std::size_t n, F&& body) {
  std::vector<std::exception_ptr> failures(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
    try {
      body(static_cast<std::size_t>(k));
    } catch (...) {
      failures[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
}

std::vector<double> mean_vector(std::span<const ActivationPair> pairs, bool augmented) {
  std::vector<double> mean(pairs.front().original.values.size(), 0.0);
  for (const auto& p : pairs) {
    const auto& v = augmented ? p.augmented.values : p.original.values;
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += v[j];
  }
  for (double& v : mean) v /= static_cast<double>(pairs.size());
  return mean;
}

std::string join_kinds(const std::vector<synth::ConceptKind>& kinds) {
  std::string s;
  for (auto k : kinds) s += (s.empty() ? "" : "+") + synth::to_string(k);
  return s.empty() ? "none" : s;
}

}  // namespace

AcavReport run_concept_experiment(const nn::Model& model, std::span<const synth::Sample> healthy_pool,
                                  const std::map<std::size_t, LayerReferences>& references,
                                  std::span<const ConceptConfig> configs, std::span<const ProbeLayer> layers,
                                  const ExperimentOptions& options) {
  if (healthy_pool.empty()) throw ConfigError("healthy pool is empty");
  if (configs.empty()) throw ConfigError("no concept configurations given");
  if (layers.empty()) throw ConfigError("no probe layers given");
  for (const auto& l : layers) {
    if (!references.contains(l.index)) {
      throw EmptyReferenceError("no reference vectors for probe layer " + l.name);
    }
  }
  for (const auto& s : healthy_pool) {
    if (s.label != synth::Label::healthy) throw ConfigError("augmentation pool must contain healthy samples only");
  }

  AcavReport report;
  report.seed = options.seed;
  report.margin = options.margin;
  report.pool_size = healthy_pool.size();

  // Originals: keep only samples classified healthy with confidence.
  std::vector<Evaluation> originals(healthy_pool.size());
  parallel_for(healthy_pool.size(), [&](std::size_t i) {
    originals[i] = evaluate(model, healthy_pool[i].image, layers, options.margin);
  });
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < originals.size(); ++i)
    if (originals[i].decision == Decision::healthy) eligible.push_back(i);
  if (eligible.empty()) {
    throw NoDecisionError("no pool sample is confidently classified healthy; cannot measure concept influence");
  }
  report.eligible = eligible.size();

  for (const ConceptConfig& config : configs) {
    std::vector<Evaluation> augmented(eligible.size());
    parallel_for(eligible.size(), [&](std::size_t k) {
      const std::size_t i = eligible[k];
      const imaging::Image img = augment(healthy_pool[i].image, healthy_pool[i].mask, config,
                                         derive_seed(options.seed, {i}), options);
      augmented[k] = evaluate(model, img, layers, options.margin);
    });

    std::vector<Decision> before, after;
    for (std::size_t k = 0; k < eligible.size(); ++k) {
      before.push_back(originals[eligible[k]].decision);
      after.push_back(augmented[k].decision);
    }
    const FlipMetrics flips = flip_metrics(before, after);

    for (std::size_t s = 0; s < layers.size(); ++s) {
      std::vector<ActivationPair> pairs;
      pairs.reserve(eligible.size());
      for (std::size_t k = 0; k < eligible.size(); ++k) {
        pairs.push_back({originals[eligible[k]].activations[s], augmented[k].activations[s]});
      }
      const LayerReferences& refs = references.at(layers[s].index);
      const SimilarityDeviation sim = similarity_deviation(refs.healthy.values, pairs);
      const auto mean_aug = mean_vector(pairs, true);
      const auto mean_orig = mean_vector(pairs, false);

      AcavRow row;
      row.concept_name = config.name;
      row.kinds = join_kinds(config.kinds);
      row.count = config.count;
      row.scale = synth::to_string(config.scale);
      row.intensity = config.intensity;
      row.layer = layers[s].name;
      row.layer_index = layers[s].index;
      row.samples = pairs.size();
      row.sim_original = sim.mean_original;
      row.sim_augmented = sim.mean_augmented;
      row.abs_deviation = sim.deviation;
      row.delta_v = delta_v(pairs);
      row.flip_rate = flips.flip_rate;
      row.literal_ratio = flips.literal_ratio;
      row.flipped = flips.flipped;
      row.preserved = flips.preserved;
      row.aug_abstained = flips.augmented_abstained;
      row.angle_healthy = cosine_angle(mean_aug, refs.healthy.values).degrees;
      row.angle_diseased = cosine_angle(mean_aug, refs.diseased.values).degrees;
      row.angle_original_healthy = cosine_angle(mean_orig, refs.healthy.values).degrees;
      row.angle_original_diseased = cosine_angle(mean_orig, refs.diseased.values).degrees;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace acav::probe
