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

#include "acav/probe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "acav/core/error.hpp"

namespace acav::probe {

const char* to_string(Decision d) {
  switch (d) {
    case Decision::healthy: return "healthy";
    case Decision::diseased: return "diseased";
    case Decision::abstain: return "abstain";
  }
  return "unknown";
}

Decision classify_confident(double p_healthy, double margin) {
  if (!(margin >= 0.0 && margin < 0.5)) throw ConfigError("confidence margin must lie in [0, 0.5)");
  if (p_healthy > 0.5 + margin / 2.0) return Decision::healthy;
  if (p_healthy < 0.5 - margin / 2.0) return Decision::diseased;
  return Decision::abstain;
}

Decision classify_confident(const nn::Model& model, const imaging::Image& image, double margin) {
  const auto probs = model.forward(imaging::to_tensor(image));
  return classify_confident(static_cast<double>(probs[0]), margin);
}

Angle cosine_angle(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw DimensionError("cosine_angle: lengths " + std::to_string(u.size()) + " and " + std::to_string(v.size()));
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) throw UndefinedAngleError("angle with a zero vector is undefined");
  Angle a;
  a.cosine = std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
  a.degrees = std::acos(a.cosine) * 180.0 / std::numbers::pi;
  return a;
}

double delta_v(std::span<const ActivationPair> pairs) {
  if (pairs.empty()) throw DimensionError("delta_v needs at least one pair");
  double total = 0.0;
  for (const auto& p : pairs) {
    const auto& a = p.original.values;
    const auto& b = p.augmented.values;
    if (a.size() != b.size()) {
      throw DimensionError("delta_v: pair lengths " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
    }
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sq += (b[i] - a[i]) * (b[i] - a[i]);
    total += std::sqrt(sq);
  }
  return total / static_cast<double>(pairs.size());
}

SimilarityDeviation similarity_deviation(std::span<const double> reference, std::span<const ActivationPair> pairs) {
  if (pairs.empty()) throw DimensionError("similarity_deviation needs at least one pair");
  SimilarityDeviation out;
  out.original.reserve(pairs.size());
  out.augmented.reserve(pairs.size());
  double so = 0.0, sa = 0.0;
  for (const auto& p : pairs) {
    out.original.push_back(cosine_angle(p.original.values, reference).cosine);
    out.augmented.push_back(cosine_angle(p.augmented.values, reference).cosine);
    so += out.original.back();
    sa += out.augmented.back();
  }
  const double n = static_cast<double>(pairs.size());
  out.mean_original = so / n;
  out.mean_augmented = sa / n;
  out.deviation = std::abs(out.mean_original - out.mean_augmented);
  return out;
}

FlipMetrics flip_metrics(std::span<const Decision> original, std::span<const Decision> augmented) {
  if (original.size() != augmented.size()) throw DimensionError("flip_metrics: decision lists differ in length");
  if (original.empty()) throw DimensionError("flip_metrics needs at least one pair");
  FlipMetrics m;
  for (std::size_t i = 0; i < original.size(); ++i) {
    if (original[i] == Decision::abstain) {
      ++m.original_abstained;
      continue;
    }
    ++m.total;
    if (augmented[i] == Decision::abstain) {
      ++m.augmented_abstained;
    } else if (augmented[i] != original[i]) {
      ++m.flipped;
    }
  }
  if (m.total == 0) throw NoDecisionError("every original sample abstained; no flips can be measured");
  m.preserved = m.total - m.flipped;
  m.flip_rate = static_cast<double>(m.flipped) / static_cast<double>(m.total);
  m.literal_ratio = m.preserved == 0 ? std::numeric_limits<double>::infinity()
                                     : static_cast<double>(m.flipped) / static_cast<double>(m.preserved);
  return m;
}

double pattern_entropy(std::span<const double> proportions) {
  if (proportions.empty()) throw NormalizationError("pattern_entropy needs at least one proportion");
  double sum = 0.0;
  for (double p : proportions) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw NormalizationError("proportions must be finite and non-negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw NormalizationError("proportions sum to " + std::to_string(sum) + ", expected 1");
  }
  double h = 0.0;
  for (double p : proportions)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

}  // namespace acav::probe
