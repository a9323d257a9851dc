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
#include <limits>
#include <span>
#include <vector>

#include "acav/imaging/image.hpp"
#include "acav/nn/model.hpp"

namespace acav::probe {

using nn::ActivationVector;

enum class Decision { healthy, diseased, abstain };

const char* to_string(Decision d);

/// healthy if p_healthy > 0.5 + margin/2, diseased if p_healthy < 0.5 - margin/2,
/// abstain otherwise. margin 0.2 gives the 0.6 / 0.4 thresholds.
Decision classify_confident(double p_healthy, double margin);
Decision classify_confident(const nn::Model& model, const imaging::Image& image, double margin);

struct Angle {
  double cosine = 0.0;
  double degrees = 0.0;
};

/// Cosine similarity clamped to [-1, 1] and the angle between u and v in degrees.
Angle cosine_angle(std::span<const double> u, std::span<const double> v);

struct ActivationPair {
  ActivationVector original;   // V_l
  ActivationVector augmented;  // V_la
};

/// Mean over pairs of the Euclidean norm |V_la - V_l|.
double delta_v(std::span<const ActivationPair> pairs);

struct SimilarityDeviation {
  double mean_original = 0.0;   // mean cosine of originals to the reference
  double mean_augmented = 0.0;  // same for augmented inputs
  double deviation = 0.0;       // |mean_original - mean_augmented|
  std::vector<double> original;
  std::vector<double> augmented;
};

SimilarityDeviation similarity_deviation(std::span<const double> reference,
                                         std::span<const ActivationPair> pairs);

struct FlipMetrics {
  double flip_rate = 0.0;      // flipped / total
  double literal_ratio = 0.0;  // flipped / preserved, +inf when nothing is preserved
  std::size_t total = 0;       // pairs whose original made a decision
  std::size_t flipped = 0;
  std::size_t preserved = 0;             // total - flipped, includes augmented abstentions
  std::size_t augmented_abstained = 0;   // counted as non-flips
  std::size_t original_abstained = 0;    // excluded from total
};

/// Compares decisions before and after augmentation, index by index.
/// Throws NoDecisionError when every original abstains.
FlipMetrics flip_metrics(std::span<const Decision> original, std::span<const Decision> augmented);

/// H = -sum p_i ln p_i with 0 ln 0 = 0. Proportions must be non-negative and
/// sum to 1 within 1e-9.
double pattern_entropy(std::span<const double> proportions);

}  // namespace acav::probe
