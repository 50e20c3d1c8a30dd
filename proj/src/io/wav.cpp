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

#include "trihead/io/wav.hpp"

#include <algorithm>
#include <cmath>

#include "trihead/core/error.hpp"
#include "trihead/io/binary.hpp"

namespace trihead::io {

AudioTrack decode_wav(const std::vector<char>& bytes, const std::string& what) {
  ByteReader r(bytes.data(), bytes.size(), what);
  if (bytes.size() < 12 || r.bytes(4) != "RIFF") fail(ErrorCode::bad_magic, what + ": not RIFF");
  r.u32();
  if (r.bytes(4) != "WAVE") fail(ErrorCode::bad_magic, what + ": not WAVE");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  while (r.remaining() >= 8) {
    const std::string id = r.bytes(4);
    const std::uint32_t size = r.u32();
    if (id == "fmt ") {
      if (size < 16) fail(ErrorCode::malformed, what + ": short fmt chunk");
      format = static_cast<std::uint16_t>(r.u8() | (r.u8() << 8));
      channels = static_cast<std::uint16_t>(r.u8() | (r.u8() << 8));
      rate = r.u32();
      r.u32();
      r.u8();
      r.u8();
      bits = static_cast<std::uint16_t>(r.u8() | (r.u8() << 8));
      r.bytes(size - 16 + (size & 1u));
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) fail(ErrorCode::malformed, what + ": data before fmt");
      if (channels == 0 || rate == 0) fail(ErrorCode::malformed, what + ": zero channels or rate");
      const bool pcm16 = format == 1 && bits == 16;
      const bool f32 = format == 3 && bits == 32;
      if (!pcm16 && !f32) {
        fail(ErrorCode::malformed, what + ": only 16-bit PCM and 32-bit float are supported");
      }
      const std::size_t frame_bytes = static_cast<std::size_t>(channels) * (bits / 8);
      if (size > r.remaining()) fail(ErrorCode::truncated_payload, what + ": data chunk is short");
      const std::size_t frames = size / frame_bytes;
      AudioTrack track;
      track.sample_rate = static_cast<int>(rate);
      track.samples.resize(frames);
      for (std::size_t i = 0; i < frames; ++i) {
        double sum = 0.0;
        for (int c = 0; c < channels; ++c) {
          if (pcm16) {
            sum += static_cast<std::int16_t>(static_cast<std::uint16_t>(r.u8() | (r.u8() << 8))) / 32768.0;
          } else {
            sum += r.f32();
          }
        }
        track.samples[i] = sum / channels;
      }
      return track;
    } else {
      r.bytes(size + (size & 1u));
    }
  }
  fail(ErrorCode::malformed, what + ": no data chunk");
}

AudioTrack read_wav(const std::string& path) { return decode_wav(read_file(path), path); }

std::vector<char> encode_wav(const AudioTrack& track) {
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(track.samples.size() * 2);
  ByteWriter w;
  w.bytes("RIFF");
  w.u32(36 + data_bytes);
  w.bytes("WAVE");
  w.bytes("fmt ");
  w.u32(16);
  w.u8(1), w.u8(0);  // PCM
  w.u8(1), w.u8(0);  // mono
  w.u32(static_cast<std::uint32_t>(track.sample_rate));
  w.u32(static_cast<std::uint32_t>(track.sample_rate) * 2);
  w.u8(2), w.u8(0);
  w.u8(16), w.u8(0);
  w.bytes("data");
  w.u32(data_bytes);
  for (double s : track.samples) {
    const long q = std::clamp(std::lround(s * 32768.0), -32768L, 32767L);
    const auto v = static_cast<std::uint16_t>(static_cast<std::int16_t>(q));
    w.u8(static_cast<std::uint8_t>(v & 0xff));
    w.u8(static_cast<std::uint8_t>(v >> 8));
  }
  return std::move(w.data());
}

void write_wav(const std::string& path, const AudioTrack& track) { write_file(path, encode_wav(track)); }

}  // namespace trihead::io
