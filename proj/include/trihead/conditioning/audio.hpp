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
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace trihead {

struct AudioTrack {
  std::vector<double> samples;  // in [-1, 1]
  int sample_rate = 16000;

  std::size_t sample_count() const { return samples.size(); }
  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
};

/// Per-frame audio embeddings, N_frames x d_a row-major.
struct AudioEmbeddingSequence {
  int d_a = 0;
  double fps = 25.0;
  std::vector<double> values;
  std::optional<std::vector<double>> blink;  // one value per frame when present

  std::size_t frames() const { return d_a == 0 ? 0 : values.size() / static_cast<std::size_t>(d_a); }
  std::span<const double> row(std::size_t t) const {
    return std::span<const double>(values).subspan(t * static_cast<std::size_t>(d_a), static_cast<std::size_t>(d_a));
  }
  std::span<double> row(std::size_t t) {
    return std::span<double>(values).subspan(t * static_cast<std::size_t>(d_a), static_cast<std::size_t>(d_a));
  }
};

/// Floor inside the filterbank logarithm.
inline constexpr double kFilterbankFloor = 1e-10;

/// ceil(T * fps) for a track of `sample_count` samples at `sample_rate`.
std::size_t frame_count(std::size_t sample_count, int sample_rate, double fps);

/// Deterministic stand-in for a pretrained speech encoder. Frame t looks at a
/// Hann-weighted window of width 2/fps seconds centred at (t + 0.5)/fps. The first d_a/2
/// values are log mel-band energies of that window; the last d_a/2 are the log ratio of
/// the band energy in the window's later half to its earlier half.
AudioEmbeddingSequence featurize_audio(const AudioTrack& track, double fps, int d_a);

/// Number of featurize_audio calls made by this process.
std::uint64_t featurize_audio_invocations();

/// Features file: "LNAF", u32 version, u32 frames, u32 d_a, f32 fps, u32 flags,
/// frames*d_a f32, then (flags bit 0) one f32 blink value per frame. Little-endian.
void write_feature_file(const std::string& path, const AudioEmbeddingSequence& seq);

/// Throws bad_magic, unsupported_version, truncated_payload, or dimension_mismatch
/// (when `expected_d_a` is given and differs).
AudioEmbeddingSequence read_feature_file(const std::string& path,
                                         std::optional<int> expected_d_a = std::nullopt);

/// Per-dimension affine standardization applied to embeddings before conditioning.
struct EmbeddingNormalizer {
  std::vector<double> mean;
  std::vector<double> inv_scale;

  static EmbeddingNormalizer identity(int d_a);
  static EmbeddingNormalizer fit(const AudioEmbeddingSequence& seq);
  int d_a() const { return static_cast<int>(mean.size()); }
  void apply(std::span<const double> in, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> in) const;
};

}  // namespace trihead
