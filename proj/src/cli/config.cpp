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

#include "acav/cli/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "acav/cli/hash.hpp"
#include "acav/core/error.hpp"
#include "acav/core/rng.hpp"

namespace acav::cli {
namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename V>
V get_or(const json& obj, const char* key, V fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<V>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("wrong type for '") + key + "' in " + where);
  }
}

std::size_t count_or(const json& obj, const char* key, std::size_t fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(std::string("'") + key + "' in " + where + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

synth::DatasetSpec parse_dataset(const json& j) {
  const std::string where = "dataset";
  require_keys(j, where, {"scene", "healthy", "diseased", "frequencies", "scale_weights", "height", "width",
                          "intensity_min", "intensity_max", "min_distance"});
  synth::DatasetSpec s;
  s.scene = synth::parse_scene_kind(get_or<std::string>(j, "scene", "fundus", where));
  s.healthy_count = count_or(j, "healthy", 0, where);
  s.diseased_count = count_or(j, "diseased", 0, where);
  if (j.contains("frequencies")) {
    const json& f = j.at("frequencies");
    if (!f.is_object()) throw ConfigError("dataset.frequencies must be an object");
    for (const auto& [key, value] : f.items()) {
      if (!value.is_number()) throw ConfigError("dataset.frequencies." + key + " must be a number");
      s.diseased_frequency[synth::parse_concept_kind(key)] = value.get<double>();
    }
  }
  if (j.contains("scale_weights")) {
    const json& w = j.at("scale_weights");
    require_keys(w, "dataset.scale_weights", {"small", "medium", "large"});
    s.scale_weights = {get_or<double>(w, "small", 0.0, "dataset.scale_weights"),
                       get_or<double>(w, "medium", 0.0, "dataset.scale_weights"),
                       get_or<double>(w, "large", 0.0, "dataset.scale_weights")};
  }
  s.height = count_or(j, "height", 64, where);
  s.width = count_or(j, "width", 64, where);
  s.intensity_min = get_or<double>(j, "intensity_min", s.intensity_min, where);
  s.intensity_max = get_or<double>(j, "intensity_max", s.intensity_max, where);
  s.min_distance = get_or<double>(j, "min_distance", s.min_distance, where);
  synth::validate(s);
  return s;
}

nn::TrainConfig parse_train(const json& j) {
  const std::string where = "train";
  require_keys(j, where, {"learning_rate", "epochs", "batch_size"});
  nn::TrainConfig t;
  t.learning_rate = get_or<double>(j, "learning_rate", t.learning_rate, where);
  t.epochs = count_or(j, "epochs", t.epochs, where);
  t.batch_size = count_or(j, "batch_size", t.batch_size, where);
  if (!(t.learning_rate > 0.0)) throw ConfigError("train.learning_rate must be positive");
  if (t.batch_size == 0) throw ConfigError("train.batch_size must be positive");
  return t;
}

std::string format_intensity(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::vector<probe::ConceptConfig> parse_sweep(const json& j, std::size_t index) {
  const std::string where = "probe.sweeps[" + std::to_string(index) + "]";
  require_keys(j, where, {"name", "kinds", "counts", "scales", "intensities"});
  if (!j.contains("kinds") || !j.at("kinds").is_array() || j.at("kinds").empty()) {
    throw ConfigError(where + ".kinds must be a non-empty array");
  }
  std::vector<synth::ConceptKind> kinds;
  for (const auto& k : j.at("kinds")) kinds.push_back(synth::parse_concept_kind(k.get<std::string>()));
  std::string name = get_or<std::string>(j, "name", "", where);
  if (name.empty()) {
    for (auto k : kinds) name += (name.empty() ? "" : "+") + synth::to_string(k);
  }
  if (name.find_first_of(",\"\n") != std::string::npos) throw ConfigError(where + ".name must not contain commas or quotes");

  const auto counts = get_or<std::vector<std::size_t>>(j, "counts", {1}, where);
  const auto scales = get_or<std::vector<std::string>>(j, "scales", {"medium"}, where);
  const auto intensities = get_or<std::vector<double>>(j, "intensities", {1.0}, where);
  if (counts.empty() || scales.empty() || intensities.empty()) {
    throw ConfigError(where + ": counts, scales and intensities must not be empty");
  }
  std::vector<probe::ConceptConfig> out;
  for (std::size_t count : counts) {
    for (const auto& scale : scales) {
      for (double intensity : intensities) {
        if (!(intensity >= 0.0)) throw ConfigError(where + ": intensities must be non-negative");
        probe::ConceptConfig c;
        c.kinds = kinds;
        c.count = count;
        c.scale = synth::parse_scale_class(scale);
        c.intensity = intensity;
        c.name = name + " x" + std::to_string(count) + " " + scale +
                 (intensity != 1.0 ? " i" + format_intensity(intensity) : "");
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

ProbeSettings parse_probe(const json& j) {
  const std::string where = "probe";
  require_keys(j, where, {"margin", "layers", "pool_size", "reference_healthy", "reference_diseased",
                          "min_distance", "sweeps"});
  ProbeSettings p;
  p.margin = get_or<double>(j, "margin", p.margin, where);
  if (!(p.margin >= 0.0 && p.margin < 0.5)) throw ConfigError("probe.margin must lie in [0, 0.5)");
  p.layers = get_or<std::vector<std::string>>(j, "layers", p.layers, where);
  if (p.layers.empty()) throw ConfigError("probe.layers must not be empty");
  p.pool_size = count_or(j, "pool_size", p.pool_size, where);
  p.reference_healthy = count_or(j, "reference_healthy", p.reference_healthy, where);
  p.reference_diseased = count_or(j, "reference_diseased", p.reference_diseased, where);
  p.min_distance = get_or<double>(j, "min_distance", p.min_distance, where);
  if (p.pool_size == 0) throw ConfigError("probe.pool_size must be positive");
  if (!j.contains("sweeps") || !j.at("sweeps").is_array() || j.at("sweeps").empty()) {
    throw ConfigError("probe.sweeps must be a non-empty array");
  }
  std::size_t i = 0;
  for (const auto& s : j.at("sweeps")) {
    auto expanded = parse_sweep(s, i++);
    p.concepts.insert(p.concepts.end(), expanded.begin(), expanded.end());
  }
  return p;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, std::optional<std::uint64_t> seed_override) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require_keys(j, "config", {"seed", "dataset", "train", "probe", "data_dir"});
  for (const char* key : {"seed", "dataset", "train", "probe"}) {
    if (!j.contains(key)) throw ConfigError(std::string("config is missing '") + key + "'");
  }
  ExperimentConfig c;
  if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
  c.seed = j.at("seed").get<std::uint64_t>();
  c.dataset = parse_dataset(j.at("dataset"));
  c.train = parse_train(j.at("train"));
  c.probe = parse_probe(j.at("probe"));
  if (j.contains("data_dir")) c.data_dir = get_or<std::string>(j, "data_dir", "", "config");
  std::string hashed = text;
  if (seed_override) {
    c.seed = *seed_override;
    hashed += "\n--seed=" + std::to_string(*seed_override);
  }
  c.dataset.seed = dataset_seed(c);
  c.train.master_seed = train_seed(c);
  c.hash = sha256_hex(hashed);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), seed_override);
}

std::uint64_t dataset_seed(const ExperimentConfig& c) { return derive_seed(c.seed, {0x64617461u}); }
std::uint64_t init_seed(const ExperimentConfig& c) { return derive_seed(c.seed, {0x696e6974u}); }
std::uint64_t train_seed(const ExperimentConfig& c) { return derive_seed(c.seed, {0x7472616eu}); }
std::uint64_t reference_seed(const ExperimentConfig& c) { return derive_seed(c.seed, {0x72656673u}); }
std::uint64_t pool_seed(const ExperimentConfig& c) { return derive_seed(c.seed, {0x706f6f6cu}); }
std::uint64_t probe_seed(const ExperimentConfig& c) { return derive_seed(c.seed, {0x70726f62u}); }

}  // namespace acav::cli
