// Copyright 2026 The trihead Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "trihead/io/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "trihead/core/error.hpp"
#include "trihead/io/binary.hpp"

namespace trihead::io {

std::uint8_t quantize(double v) {
  if (!(v > 0.0)) return 0;  // also maps NaN to 0
  if (v >= 1.0) return 255;
  return static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
}

namespace {

std::string netpbm_header(const char* magic, int w, int h) {
  return std::string(magic) + "\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
}

struct Header {
  int width = 0;
  int height = 0;
  std::size_t data_offset = 0;
};

// Parses "<magic> <w> <h> <maxval>" with '#' comments, then exactly one whitespace byte.
Header parse_header(const std::vector<char>& bytes, const char* magic, const std::string& what) {
  if (bytes.size() < 2 || bytes[0] != magic[0] || bytes[1] != magic[1]) {
    fail(ErrorCode::bad_magic, what + ": expected " + magic);
  }
  std::size_t pos = 2;
  auto next_int = [&]() -> long {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    if (pos >= bytes.size()) fail(ErrorCode::truncated_payload, what + ": header ends early");
    if (!std::isdigit(static_cast<unsigned char>(bytes[pos]))) fail(ErrorCode::malformed, what + ": bad header");
    long v = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      v = v * 10 + (bytes[pos] - '0');
      if (v > 1'000'000) fail(ErrorCode::malformed, what + ": header value too large");
      ++pos;
    }
    return v;
  };
  Header h;
  h.width = static_cast<int>(next_int());
  h.height = static_cast<int>(next_int());
  const long maxval = next_int();
  if (maxval != 255) fail(ErrorCode::malformed, what + ": maxval " + std::to_string(maxval) + " is not 255");
  if (h.width <= 0 || h.height <= 0) fail(ErrorCode::malformed, what + ": empty image");
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    fail(ErrorCode::truncated_payload, what + ": header ends early");
  }
  h.data_offset = pos + 1;
  return h;
}

}  // namespace

std::vector<char> encode_ppm(const Frame& frame) {
  const std::string header = netpbm_header("P6", frame.width, frame.height);
  std::vector<char> out(header.begin(), header.end());
  out.reserve(out.size() + frame.rgb.size());
  for (double v : frame.rgb) out.push_back(static_cast<char>(quantize(v)));
  return out;
}

Frame decode_ppm(const std::vector<char>& bytes, const std::string& what) {
  const Header h = parse_header(bytes, "P6", what);
  const std::size_t need = static_cast<std::size_t>(h.width) * h.height * 3;
  if (bytes.size() - h.data_offset < need) fail(ErrorCode::truncated_payload, what + ": pixel data is short");
  Frame f(h.width, h.height);
  for (std::size_t i = 0; i < need; ++i) f.rgb[i] = dequantize(static_cast<std::uint8_t>(bytes[h.data_offset + i]));
  return f;
}

void write_ppm(const std::string& path, const Frame& frame) { write_file(path, encode_ppm(frame)); }
Frame read_ppm(const std::string& path) { return decode_ppm(read_file(path), path); }

std::vector<char> encode_pgm(const GrayImage& image) {
  require_size("pgm values", static_cast<std::size_t>(image.width) * image.height, image.values.size());
  const std::string header = netpbm_header("P5", image.width, image.height);
  std::vector<char> out(header.begin(), header.end());
  for (double v : image.values) out.push_back(static_cast<char>(quantize(v)));
  return out;
}

GrayImage decode_pgm(const std::vector<char>& bytes, const std::string& what) {
  const Header h = parse_header(bytes, "P5", what);
  const std::size_t need = static_cast<std::size_t>(h.width) * h.height;
  if (bytes.size() - h.data_offset < need) fail(ErrorCode::truncated_payload, what + ": pixel data is short");
  GrayImage g{h.width, h.height, std::vector<double>(need)};
  for (std::size_t i = 0; i < need; ++i) g.values[i] = dequantize(static_cast<std::uint8_t>(bytes[h.data_offset + i]));
  return g;
}

void write_pgm(const std::string& path, const GrayImage& image) { write_file(path, encode_pgm(image)); }
GrayImage read_pgm(const std::string& path) { return decode_pgm(read_file(path), path); }

}  // namespace trihead::io
