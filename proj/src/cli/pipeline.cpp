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

#include "acav/cli/pipeline.hpp"

#include <fstream>

#include <json.hpp>

#include "acav/core/error.hpp"
#include "acav/core/log.hpp"
#include "acav/imaging/image.hpp"
#include "acav/probe/metrics.hpp"
#include "acav/probe/reference.hpp"

namespace acav::cli {

nn::TrainingSet to_training_set(const synth::LabeledDataset& data) {
  nn::TrainingSet set;
  set.inputs.reserve(data.samples.size());
  set.labels.reserve(data.samples.size());
  for (const auto& s : data.samples) {
    set.inputs.push_back(imaging::to_tensor(s.image));
    set.labels.push_back(static_cast<std::size_t>(s.label));
  }
  return set;
}

TrainedModel train_model(const ExperimentConfig& config, const synth::LabeledDataset& data) {
  if (data.samples.empty()) throw ConfigError("training dataset is empty");
  const auto& first = data.samples.front().image;
  auto model = nn::make_classifier(first.channels, first.height, first.width, init_seed(config));
  const auto set = to_training_set(data);
  auto result = nn::train(std::move(model), set, config.train);
  TrainedModel out{std::move(result.model), std::move(result.loss_history), 0.0};
  out.train_accuracy = nn::accuracy(out.model, set);
  return out;
}

bool early_loss_decreasing(const std::vector<double>& loss_history) {
  const std::size_t n = std::min<std::size_t>(3, loss_history.size());
  for (std::size_t i = 1; i < n; ++i) {
    if (!(loss_history[i] < loss_history[i - 1])) return false;
  }
  return true;
}

synth::LabeledDataset reference_set(const ExperimentConfig& config) {
  auto spec = config.dataset;
  spec.healthy_count = config.probe.reference_healthy;
  spec.diseased_count = config.probe.reference_diseased;
  spec.seed = reference_seed(config);
  return synth::gen_dataset(spec);
}

synth::LabeledDataset healthy_pool(const ExperimentConfig& config) {
  auto spec = config.dataset;
  spec.healthy_count = config.probe.pool_size;
  spec.diseased_count = 0;
  spec.seed = pool_seed(config);
  return synth::gen_dataset(spec);
}

probe::AcavReport probe_model(const ExperimentConfig& config, const nn::Model& model,
                              const std::map<synth::ConceptKind, double>& pattern_weights) {
  const auto layers = probe::probe_layers(model, config.probe.layers);
  std::vector<std::size_t> indices;
  for (const auto& l : layers) indices.push_back(l.index);

  const auto refs = reference_set(config);
  const auto ref_set = to_training_set(refs);
  std::vector<synth::Label> labels;
  for (const auto& s : refs.samples) labels.push_back(s.label);
  std::map<std::size_t, probe::LayerReferences> references;
  try {
    references = probe::build_references(model, ref_set.inputs, labels, indices, config.probe.margin);
  } catch (const EmptyReferenceError& e) {
    throw EmptyReferenceError(std::string(e.what()) + " (raise probe.reference_* or lower probe.margin)");
  }
  log::info("references: healthy n=", references.begin()->second.healthy.count,
            ", diseased n=", references.begin()->second.diseased.count);

  const auto pool = healthy_pool(config);
  probe::ExperimentOptions options;
  options.margin = config.probe.margin;
  options.seed = probe_seed(config);
  options.min_distance = config.probe.min_distance;
  options.placement = synth::placement_rule(config.dataset.scene);
  probe::AcavReport report;
  try {
    report = probe::run_concept_experiment(model, pool.samples, references, config.probe.concepts, layers, options);
  } catch (const NoDecisionError& e) {
    throw NoDecisionError(std::string(e.what()) + " (train longer or lower probe.margin)");
  }
  report.seed = config.seed;
  report.config_hash = config.hash;

  double total = 0.0;
  for (const auto& [kind, w] : pattern_weights) {
    if (!(w >= 0.0)) throw ConfigError("pattern weights must be non-negative");
    total += w;
  }
  std::vector<double> p;
  for (const auto& [kind, w] : pattern_weights) {
    if (total == 0.0) break;
    const double v = w / total;
    report.proportions[synth::to_string(kind)] = v;
    p.push_back(v);
  }
  report.entropy = p.empty() ? 0.0 : probe::pattern_entropy(p);
  return report;
}

std::map<synth::ConceptKind, double> manifest_totals(const std::filesystem::path& dataset_dir) {
  const auto path = dataset_dir / "manifest.json";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("dataset manifest not found: " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed manifest " + path.string() + ": " + e.what());
  }
  if (!doc.contains("totals") || !doc.at("totals").is_object()) {
    throw FormatError("manifest " + path.string() + " has no totals object");
  }
  std::map<synth::ConceptKind, double> out;
  for (const auto& [key, value] : doc.at("totals").items()) {
    out[synth::parse_concept_kind(key)] = value.get<double>();
  }
  return out;
}

}  // namespace acav::cli
