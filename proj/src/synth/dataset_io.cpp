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

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "acav/core/error.hpp"
#include "acav/imaging/pnm.hpp"
#include "acav/synth/dataset.hpp"

namespace acav::synth {
namespace {

constexpr int kManifestSchema = 1;

std::string stem(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "sample_%05zu", i);
  return buf;
}

std::string image_path(const LabeledDataset& data, std::size_t i) {
  return "images/" + stem(i) + (channels_of(data.scene) == 3 ? ".ppm" : ".pgm");
}

std::string mask_path(std::size_t i) { return "masks/" + stem(i) + "_mask.pgm"; }

}  // namespace

std::string manifest_json(const LabeledDataset& data, const std::string& config_hash) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["schema_version"] = kManifestSchema;
  doc["config_hash"] = config_hash;
  doc["scene"] = to_string(data.scene);
  doc["seed"] = data.seed;
  doc["healthy"] = data.count(Label::healthy);
  doc["diseased"] = data.count(Label::diseased);
  ordered_json samples = ordered_json::array();
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    const Sample& s = data.samples[i];
    ordered_json inv = ordered_json::array();
    for (const auto& rec : s.inventory) {
      inv.push_back({{"kind", to_string(rec.kind)},
                     {"scale", to_string(rec.scale)},
                     {"row", rec.row},
                     {"col", rec.col},
                     {"height", rec.height},
                     {"width", rec.width},
                     {"intensity", rec.intensity},
                     {"seed", rec.seed}});
    }
    samples.push_back({{"path", image_path(data, i)},
                       {"mask", mask_path(i)},
                       {"label", to_string(s.label)},
                       {"seed", s.seed},
                       {"inventory", std::move(inv)}});
  }
  doc["samples"] = std::move(samples);
  ordered_json totals = ordered_json::object();
  for (const auto& [kind, n] : data.totals()) totals[to_string(kind)] = n;
  doc["totals"] = std::move(totals);
  return doc.dump(2) + "\n";
}

void write_dataset(const LabeledDataset& data, const std::filesystem::path& dir, const std::string& config_hash) {
  std::error_code ec;
  std::filesystem::create_directories(dir / "images", ec);
  std::filesystem::create_directories(dir / "masks", ec);
  if (ec) throw IoError("cannot create dataset directory " + dir.string() + ": " + ec.message());
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    imaging::save_image(data.samples[i].image, dir / image_path(data, i));
    imaging::save_image(data.samples[i].mask, dir / mask_path(i));
  }
  std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + (dir / "manifest.json").string());
  out << manifest_json(data, config_hash);
}

LabeledDataset read_dataset(const std::filesystem::path& dir) {
  const auto manifest = dir / "manifest.json";
  std::ifstream in(manifest);
  if (!in) throw IoError("dataset manifest not found: " + manifest.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed manifest " + manifest.string() + ": " + e.what());
  }
  LabeledDataset data;
  try {
    if (doc.at("schema_version").get<int>() != kManifestSchema) {
      throw VersionError("unsupported manifest schema in " + manifest.string());
    }
    data.scene = parse_scene_kind(doc.at("scene").get<std::string>());
    data.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& js : doc.at("samples")) {
      Sample s;
      s.image = imaging::load_image(dir / js.at("path").get<std::string>());
      s.mask = imaging::load_image(dir / js.at("mask").get<std::string>());
      s.label = parse_label(js.at("label").get<std::string>());
      s.seed = js.at("seed").get<std::uint64_t>();
      for (const auto& jr : js.at("inventory")) {
        PatternRecord rec;
        rec.kind = parse_concept_kind(jr.at("kind").get<std::string>());
        rec.scale = parse_scale_class(jr.at("scale").get<std::string>());
        rec.row = jr.at("row").get<std::size_t>();
        rec.col = jr.at("col").get<std::size_t>();
        rec.height = jr.at("height").get<std::size_t>();
        rec.width = jr.at("width").get<std::size_t>();
        rec.intensity = jr.at("intensity").get<double>();
        rec.seed = jr.at("seed").get<std::uint64_t>();
        s.inventory.push_back(rec);
      }
      data.samples.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed manifest " + manifest.string() + ": " + e.what());
  }
  return data;
}

}  // namespace acav::synth
