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

#include <cmath>

#include "trihead/conditioning/audio.hpp"
#include "trihead/core/error.hpp"
#include "trihead/io/binary.hpp"

namespace trihead {

namespace {
constexpr std::string_view kFeatureMagic = "LNAF";
constexpr std::uint32_t kFeatureVersion = 1;
constexpr std::uint32_t kFlagBlink = 1u << 0;
}  // namespace

void write_feature_file(const std::string& path, const AudioEmbeddingSequence& seq) {
  const std::size_t n = seq.frames();
  if (seq.blink && seq.blink->size() != n) require_size("blink section", n, seq.blink->size());
  io::ByteWriter w;
  w.bytes(kFeatureMagic);
  w.u32(kFeatureVersion);
  w.u32(static_cast<std::uint32_t>(n));
  w.u32(static_cast<std::uint32_t>(seq.d_a));
  w.f32(static_cast<float>(seq.fps));
  w.u32(seq.blink ? kFlagBlink : 0u);
  for (double v : seq.values) w.f32(static_cast<float>(v));
  if (seq.blink) {
    for (double b : *seq.blink) w.f32(static_cast<float>(b));
  }
  io::write_file(path, w.data());
}

AudioEmbeddingSequence read_feature_file(const std::string& path, std::optional<int> expected_d_a) {
  const std::vector<char> bytes = io::read_file(path);
  io::ByteReader r(bytes.data(), bytes.size(), "feature file " + path);
  if (bytes.size() < 4 || r.bytes(4) != kFeatureMagic) fail(ErrorCode::bad_magic, "feature file " + path);
  const std::uint32_t version = r.u32();
  if (version != kFeatureVersion) {
    fail(ErrorCode::unsupported_version, "feature file version " + std::to_string(version));
  }
  const std::uint32_t frames = r.u32();
  const std::uint32_t d_a = r.u32();
  const float fps = r.f32();
  const std::uint32_t flags = r.u32();
  if (expected_d_a && static_cast<int>(d_a) != *expected_d_a) {
    fail(ErrorCode::dimension_mismatch, "d_a: feature file has " + std::to_string(d_a) +
                                            ", checkpoint expects " + std::to_string(*expected_d_a));
  }
  const std::size_t count = static_cast<std::size_t>(frames) * d_a;
  const std::size_t needed = count + ((flags & kFlagBlink) ? frames : 0u);
  if (r.remaining() < needed * 4) {
    fail(ErrorCode::truncated_payload, "feature file declares " + std::to_string(frames) +
                                           " frames but holds " + std::to_string(r.remaining() / 4) + " values");
  }
  AudioEmbeddingSequence seq;
  seq.d_a = static_cast<int>(d_a);
  seq.fps = fps;
  seq.values.resize(count);
  for (double& v : seq.values) v = r.f32();
  if (flags & kFlagBlink) {
    seq.blink.emplace(frames);
    for (double& b : *seq.blink) b = r.f32();
  }
  return seq;
}

}  // namespace trihead
