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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trihead/frame.hpp"

namespace trihead::io {

/// round(v * 255) with halves rounded up, after clamping v to [0,1].
std::uint8_t quantize(double v);
inline double dequantize(std::uint8_t q) { return q / 255.0; }

/// Binary PPM: "P6\n<W> <H>\n255\n" then W*H*3 bytes, row-major RGB.
std::vector<char> encode_ppm(const Frame& frame);
/// Throws bad_magic, malformed (header or maxval != 255), truncated_payload.
Frame decode_ppm(const std::vector<char>& bytes, const std::string& what = "ppm");

void write_ppm(const std::string& path, const Frame& frame);
Frame read_ppm(const std::string& path);

/// Binary PGM: "P5\n<W> <H>\n255\n" then W*H bytes.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> values;
};

std::vector<char> encode_pgm(const GrayImage& image);
GrayImage decode_pgm(const std::vector<char>& bytes, const std::string& what = "pgm");
void write_pgm(const std::string& path, const GrayImage& image);
GrayImage read_pgm(const std::string& path);

}  // namespace trihead::io
