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

#include "acav/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "acav/core/error.hpp"

namespace acav::nn {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint IO assumes a little-endian host");

class Writer {
 public:
  template <typename V>
  void put(V v) {
    std::uint8_t raw[sizeof(V)];
    std::memcpy(raw, &v, sizeof(V));
    bytes.insert(bytes.end(), raw, raw + sizeof(V));
  }
  void put_u32(std::size_t v) { put(static_cast<std::uint32_t>(v)); }
  std::vector<std::uint8_t> bytes;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : bytes_(b) {}

  template <typename V>
  V get(const char* what) {
    if (bytes_.size() - pos_ < sizeof(V)) {
      throw FormatError(std::string("checkpoint truncated while reading ") + what);
    }
    V v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(V));
    pos_ += sizeof(V);
    return v;
  }
  std::size_t u32(const char* what) { return get<std::uint32_t>(what); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

constexpr char kMagic[4] = {'A', 'C', 'A', 'V'};
constexpr std::size_t kMaxDims = 1 << 20;

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const Model& model, const TrainingMetadata& meta) {
  Writer w;
  for (char c : kMagic) w.put(c);
  w.put_u32(kCheckpointVersion);
  w.put_u32(model.input_shape().size());
  for (std::size_t d : model.input_shape()) w.put_u32(d);
  w.put_u32(model.layer_count());
  for (const LayerSpec& s : model.specs()) {
    w.put(static_cast<std::uint32_t>(s.kind));
    w.put_u32(s.in_channels);
    w.put_u32(s.out_channels);
    w.put_u32(s.kernel_h);
    w.put_u32(s.kernel_w);
  }
  const std::size_t pen = model.penultimate_index();
  w.put_u32(pen);
  w.put_u32(shape_volume(model.layer(pen).out_shape));
  w.put(meta.seed);
  w.put(meta.epochs);
  w.put(meta.final_loss);
  const auto params = model.parameters();
  w.put_u32(params.size());
  for (const Tensor<float>* p : params) {
    w.put(static_cast<std::uint64_t>(p->size()));
    for (float v : p->values()) w.put(v);
  }
  return std::move(w.bytes);
}

Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  for (char c : kMagic) {
    if (r.get<char>("magic") != c) throw FormatError("not an ACAV checkpoint (bad magic bytes)");
  }
  const std::size_t version = r.u32("version");
  if (version != kCheckpointVersion) {
    throw VersionError("unsupported checkpoint version " + std::to_string(version) + " (expected " +
                       std::to_string(kCheckpointVersion) + ")");
  }
  const std::size_t rank = r.u32("input rank");
  if (rank == 0 || rank > 8) throw FormatError("corrupt checkpoint header: input rank " + std::to_string(rank));
  Shape input(rank);
  for (auto& d : input) {
    d = r.u32("input shape");
    if (d == 0 || d > kMaxDims) throw FormatError("corrupt checkpoint header: input dimension");
  }
  const std::size_t n_layers = r.u32("layer count");
  if (n_layers == 0 || n_layers > 4096) throw FormatError("corrupt checkpoint header: layer count");
  std::vector<LayerSpec> specs(n_layers);
  for (auto& s : specs) {
    const std::size_t kind = r.u32("layer kind");
    if (kind < 1 || kind > 6) throw FormatError("corrupt checkpoint: unknown layer kind " + std::to_string(kind));
    s.kind = static_cast<LayerKind>(kind);
    s.in_channels = r.u32("layer spec");
    s.out_channels = r.u32("layer spec");
    s.kernel_h = r.u32("layer spec");
    s.kernel_w = r.u32("layer spec");
  }
  Checkpoint ck;
  try {
    ck.model = Model(input, specs);
  } catch (const ShapeError& e) {
    throw FormatError(std::string("corrupt checkpoint layer table: ") + e.what());
  }
  const std::size_t pen = r.u32("penultimate index");
  ck.penultimate_width = static_cast<std::uint32_t>(r.u32("penultimate width"));
  if (pen != ck.model.penultimate_index()) throw FormatError("corrupt checkpoint: penultimate index mismatch");
  ck.metadata.seed = r.get<std::uint64_t>("seed");
  ck.metadata.epochs = r.get<std::uint64_t>("epochs");
  ck.metadata.final_loss = r.get<double>("final loss");
  auto params = ck.model.parameters();
  if (r.u32("tensor count") != params.size()) throw FormatError("corrupt checkpoint: tensor count mismatch");
  for (Tensor<float>* p : params) {
    if (r.get<std::uint64_t>("tensor size") != p->size()) {
      throw FormatError("corrupt checkpoint: tensor size mismatch");
    }
    for (float& v : p->values()) v = r.get<float>("parameter data");
  }
  if (r.remaining() != 0) throw FormatError("corrupt checkpoint: trailing bytes");
  return ck;
}

void save_checkpoint(const Model& model, const TrainingMetadata& meta, const std::filesystem::path& path) {
  const auto bytes = encode_checkpoint(model, meta);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace acav::nn
