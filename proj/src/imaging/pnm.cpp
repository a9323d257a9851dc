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

#include "acav/imaging/pnm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "acav/core/error.hpp"

namespace acav::imaging {
namespace {

class HeaderParser {
 public:
  explicit HeaderParser(const std::vector<std::uint8_t>& b) : b_(b) {}

  void skip_space_and_comments() {
    while (pos_ < b_.size()) {
      if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else if (std::isspace(b_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t number(const char* what) {
    skip_space_and_comments();
    std::size_t v = 0;
    std::size_t digits = 0;
    while (pos_ < b_.size() && std::isdigit(b_[pos_])) {
      v = v * 10 + (b_[pos_] - '0');
      if (++digits > 9) throw FormatError(std::string("malformed PNM header: ") + what + " too large");
      ++pos_;
    }
    if (digits == 0) throw FormatError(std::string("malformed PNM header: missing ") + what);
    return v;
  }

  std::size_t pos_ = 0;

 private:
  const std::vector<std::uint8_t>& b_;
};

}  // namespace

std::vector<std::uint8_t> encode_pnm(const Image& image) {
  if (image.channels != 1 && image.channels != 3) throw FormatError("PNM supports 1 or 3 channels");
  const std::string header = std::string(image.channels == 1 ? "P5" : "P6") + "\n" +
                             std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + image.pixels.size());
  for (float v : image.pixels) {
    const double q = std::round(std::clamp(static_cast<double>(v), 0.0, 1.0) * 255.0);
    out.push_back(static_cast<std::uint8_t>(q));
  }
  return out;
}

Image decode_pnm(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    throw FormatError("unsupported image: expected binary PGM (P5) or PPM (P6)");
  }
  const std::size_t channels = bytes[1] == '5' ? 1 : 3;
  HeaderParser p(bytes);
  p.pos_ = 2;
  const std::size_t width = p.number("width");
  const std::size_t height = p.number("height");
  const std::size_t maxval = p.number("maxval");
  if (width == 0 || height == 0) throw FormatError("malformed PNM header: zero dimension");
  if (maxval != 255) throw FormatError("unsupported PNM maxval " + std::to_string(maxval) + " (only 255)");
  if (p.pos_ >= bytes.size() || !std::isspace(bytes[p.pos_])) {
    throw FormatError("malformed PNM header: missing separator before pixel data");
  }
  ++p.pos_;
  const std::size_t need = width * height * channels;
  if (bytes.size() - p.pos_ < need) {
    throw FormatError("truncated PNM payload: header declares " + std::to_string(need) + " bytes, found " +
                      std::to_string(bytes.size() - p.pos_));
  }
  Image img(height, width, channels);
  for (std::size_t i = 0; i < need; ++i) img.pixels[i] = static_cast<float>(bytes[p.pos_ + i] / 255.0);
  return img;
}

void save_image(const Image& image, const std::filesystem::path& path) {
  const auto bytes = encode_pnm(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

Image load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_pnm(bytes);
}

}  // namespace acav::imaging
