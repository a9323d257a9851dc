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

#include "acav/imaging/patch_io.hpp"

#include <fstream>

#include <json.hpp>

#include "acav/core/error.hpp"
#include "acav/imaging/pnm.hpp"

namespace acav::imaging {

std::filesystem::path save_patch(const AlphaPatch& patch, const std::filesystem::path& dir,
                                 const std::string& stem) {
  validate_patch(patch);
  std::filesystem::create_directories(dir);
  const std::string pattern_name = stem + (patch.pattern.channels == 1 ? "_pattern.pgm" : "_pattern.ppm");
  const std::string alpha_name = stem + "_alpha.pgm";
  save_image(patch.pattern, dir / pattern_name);
  save_image(Image(patch.height(), patch.width(), 1, patch.alpha), dir / alpha_name);

  nlohmann::ordered_json meta;
  meta["kind"] = patch.kind;
  meta["scale"] = patch.scale;
  meta["intensity"] = patch.intensity;
  meta["pattern"] = pattern_name;
  meta["alpha"] = alpha_name;
  const auto sidecar = dir / (stem + ".json");
  std::ofstream out(sidecar);
  if (!out) throw IoError("cannot write " + sidecar.string());
  out << meta.dump(2) << '\n';
  return sidecar;
}

AlphaPatch load_patch(const std::filesystem::path& sidecar) {
  std::ifstream in(sidecar);
  if (!in) throw IoError("cannot open patch sidecar " + sidecar.string());
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed patch sidecar " + sidecar.string() + ": " + e.what());
  }
  const auto dir = sidecar.parent_path();
  AlphaPatch patch;
  try {
    patch.kind = meta.at("kind").get<std::string>();
    patch.scale = meta.at("scale").get<double>();
    patch.intensity = meta.at("intensity").get<double>();
    patch.pattern = load_image(dir / meta.at("pattern").get<std::string>());
    const Image alpha = load_image(dir / meta.at("alpha").get<std::string>());
    if (alpha.channels != 1 || alpha.height != patch.pattern.height || alpha.width != patch.pattern.width) {
      throw FormatError("patch alpha does not match pattern in " + sidecar.string());
    }
    patch.alpha = alpha.pixels;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed patch sidecar " + sidecar.string() + ": " + e.what());
  }
  return patch;
}

}  // namespace acav::imaging
