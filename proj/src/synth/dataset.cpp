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

#include "acav/synth/dataset.hpp"

#include <cmath>
#include <exception>

#include "acav/core/error.hpp"
#include "acav/core/rng.hpp"
#include "acav/imaging/compose.hpp"
#include "acav/synth/generators.hpp"

namespace acav::synth {

std::size_t LabeledDataset::count(Label label) const {
  std::size_t n = 0;
  for (const auto& s : samples) n += s.label == label;
  return n;
}

std::map<ConceptKind, std::size_t> LabeledDataset::totals() const {
  std::map<ConceptKind, std::size_t> out;
  for (const auto& s : samples)
    for (const auto& rec : s.inventory) ++out[rec.kind];
  return out;
}

std::map<ConceptKind, double> LabeledDataset::proportions() const {
  const auto t = totals();
  std::size_t sum = 0;
  for (const auto& [k, n] : t) sum += n;
  std::map<ConceptKind, double> out;
  if (sum == 0) return out;
  for (const auto& [k, n] : t) out[k] = static_cast<double>(n) / static_cast<double>(sum);
  return out;
}

imaging::PlacementOptions placement_rule(SceneKind scene) {
  imaging::PlacementOptions opt;
  opt.dilation_radius = scene == SceneKind::fundus ? 5 : 0;
  return opt;
}

void validate(const DatasetSpec& spec) {
  if (spec.height < 16 || spec.width < 16) throw ConfigError("dataset images must be at least 16x16");
  double total_freq = 0.0;
  for (const auto& [kind, f] : spec.diseased_frequency) {
    if (!(f >= 0.0) || !std::isfinite(f)) throw ConfigError("pattern frequency for " + to_string(kind) + " must be >= 0");
    if (f > 0.0 && scene_of(kind) != spec.scene) {
      throw ConfigError("concept kind " + to_string(kind) + " does not belong to a " + to_string(spec.scene) + " scene");
    }
    total_freq += f;
  }
  if (spec.diseased_count > 0 && total_freq <= 0.0) {
    throw ConfigError("diseased samples requested but every pattern frequency is zero");
  }
  double wsum = 0.0;
  for (double w : spec.scale_weights) {
    if (!(w >= 0.0)) throw ConfigError("scale weights must be non-negative");
    wsum += w;
  }
  if (wsum <= 0.0) throw ConfigError("scale weights must not all be zero");
  if (!(spec.intensity_min >= 0.0 && spec.intensity_min <= spec.intensity_max && spec.intensity_max <= 1.0)) {
    throw ConfigError("intensity range must satisfy 0 <= min <= max <= 1");
  }
  if (!(spec.min_distance >= 0.0)) throw ConfigError("min_distance must be non-negative");
}

namespace {

template <typename Weights>
std::size_t weighted_pick(Rng& rng, const Weights& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = rng.uniform() * total;
  std::size_t i = 0;
  for (double w : weights) {
    if (u < w) return i;
    u -= w;
    ++i;
  }
  return weights.size() - 1;
}

constexpr int kMaxAttempts = 8;

Sample make_sample(const DatasetSpec& spec, std::size_t index) {
  Sample s;
  s.seed = derive_seed(spec.seed, {index});
  s.label = index < spec.healthy_count ? Label::healthy : Label::diseased;
  Background bg = gen_background(spec.scene, derive_seed(s.seed, {1}), spec.height, spec.width);
  s.mask = std::move(bg.mask);
  if (s.label == Label::healthy) {
    s.image = std::move(bg.image);
    return s;
  }

  std::vector<ConceptKind> kinds;
  std::vector<double> rates;
  for (const auto& [kind, f] : spec.diseased_frequency) {
    if (f > 0.0) {
      kinds.push_back(kind);
      rates.push_back(f);
    }
  }
  auto rule = placement_rule(spec.scene);

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng(derive_seed(s.seed, {2, static_cast<std::uint64_t>(attempt)}));
    std::vector<ConceptKind> draws;
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      const unsigned n = rng.poisson(rates[k]);
      for (unsigned j = 0; j < n; ++j) draws.push_back(kinds[k]);
    }
    // A diseased image carries at least one pattern.
    if (draws.empty()) draws.push_back(kinds[weighted_pick(rng, rates)]);

    std::vector<imaging::AlphaPatch> patches;
    std::vector<PatternRecord> records;
    std::size_t fh = 1, fw = 1;
    for (ConceptKind kind : draws) {
      PatternRecord rec;
      rec.kind = kind;
      rec.scale = kAllScaleClasses[weighted_pick(rng, spec.scale_weights)];
      rec.intensity = rng.uniform(spec.intensity_min, spec.intensity_max);
      rec.seed = rng.next();
      patches.push_back(gen_pattern(kind, rec.seed, rec.scale));
      rec.height = patches.back().height();
      rec.width = patches.back().width();
      fh = std::max(fh, rec.height);
      fw = std::max(fw, rec.width);
      records.push_back(rec);
    }
    rule.footprint_h = fh;
    rule.footprint_w = fw;
    std::vector<imaging::Placement> anchors;
    try {
      anchors = imaging::sample_placements(s.mask, draws.size(), spec.min_distance, rng.next(), rule);
    } catch (const PlacementInfeasibleError&) {
      continue;
    }
    imaging::Image img = bg.image;
    for (std::size_t k = 0; k < patches.size(); ++k) {
      const auto [cy, cx] = imaging::anchor_of(anchors[k], fh, fw);
      imaging::Placement p{cy - records[k].height / 2, cx - records[k].width / 2, 1.0, records[k].intensity};
      img = imaging::compose(img, patches[k], p);
      records[k].row = p.row;
      records[k].col = p.col;
    }
    s.image = std::move(img);
    s.inventory = std::move(records);
    return s;
  }
  throw GenerationError("could not place patterns in sample " + std::to_string(index) + " after " +
                        std::to_string(kMaxAttempts) + " attempts");
}

}  // namespace

LabeledDataset gen_dataset(const DatasetSpec& spec) {
  validate(spec);
  LabeledDataset data;
  data.scene = spec.scene;
  data.seed = spec.seed;
  const std::size_t n = spec.healthy_count + spec.diseased_count;
  data.samples.resize(n);
  std::vector<std::exception_ptr> failures(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      data.samples[static_cast<std::size_t>(i)] = make_sample(spec, static_cast<std::size_t>(i));
    } catch (...) {
      failures[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return data;
}

}  // namespace acav::synth
