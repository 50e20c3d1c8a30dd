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

#include "trihead/conditioning/audio.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numbers>

#include "trihead/core/error.hpp"

namespace trihead {

namespace {

std::atomic<std::uint64_t> g_featurize_calls{0};

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// Real-to-complex power spectrum of a Hann-weighted window, with band energies from a
// triangular mel filterbank. Energies are divided by the window's power so windows of
// different length measure on the same scale.
class BandAnalyzer {
 public:
  BandAnalyzer(std::size_t window, int sample_rate, int bands)
      : window_(window), nfft_(std::bit_ceil(window)), bins_(nfft_ / 2 + 1) {
    in_ = fftw_alloc_real(nfft_);
    out_ = fftw_alloc_complex(bins_);
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(nfft_), in_, out_, FFTW_ESTIMATE);

    taper_.resize(window_);
    double power = 0.0;
    for (std::size_t n = 0; n < window_; ++n) {
      taper_[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(window_));
      power += taper_[n] * taper_[n];
    }
    inv_power_ = 1.0 / power;

    const double f_lo = 50.0;
    const double f_hi = std::min(8000.0, 0.5 * sample_rate);
    const double m_lo = hz_to_mel(f_lo);
    const double m_hi = hz_to_mel(f_hi);
    std::vector<double> edges(static_cast<std::size_t>(bands) + 2);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      edges[i] = mel_to_hz(m_lo + (m_hi - m_lo) * static_cast<double>(i) / static_cast<double>(bands + 1));
    }
    filters_.assign(static_cast<std::size_t>(bands), std::vector<double>(bins_, 0.0));
    for (int m = 0; m < bands; ++m) {
      const double left = edges[m], centre = edges[m + 1], right = edges[m + 2];
      for (std::size_t k = 0; k < bins_; ++k) {
        const double f = static_cast<double>(k) * sample_rate / static_cast<double>(nfft_);
        double w = 0.0;
        if (f > left && f <= centre) w = (f - left) / (centre - left);
        else if (f > centre && f < right) w = (right - f) / (right - centre);
        filters_[m][k] = w;
      }
    }
  }
  BandAnalyzer(const BandAnalyzer&) = delete;
  BandAnalyzer& operator=(const BandAnalyzer&) = delete;
  ~BandAnalyzer() {
    fftw_destroy_plan(plan_);
    fftw_free(in_);
    fftw_free(out_);
  }

  // Band energies of samples [start, start + window), zero outside the track.
  void analyze(std::span<const double> samples, std::ptrdiff_t start, std::span<double> energy) {
    const auto total = static_cast<std::ptrdiff_t>(samples.size());
    for (std::size_t n = 0; n < nfft_; ++n) {
      double v = 0.0;
      if (n < window_) {
        const std::ptrdiff_t s = start + static_cast<std::ptrdiff_t>(n);
        if (s >= 0 && s < total) v = samples[static_cast<std::size_t>(s)] * taper_[n];
      }
      in_[n] = v;
    }
    fftw_execute(plan_);
    for (std::size_t m = 0; m < filters_.size(); ++m) {
      const auto& filt = filters_[m];
      double e = 0.0;
      for (std::size_t k = 0; k < bins_; ++k) {
        if (filt[k] != 0.0) e += filt[k] * (out_[k][0] * out_[k][0] + out_[k][1] * out_[k][1]);
      }
      energy[m] = e * inv_power_;
    }
  }

 private:
  std::size_t window_;
  std::size_t nfft_;
  std::size_t bins_;
  double* in_ = nullptr;
  fftw_complex* out_ = nullptr;
  fftw_plan plan_ = nullptr;
  std::vector<double> taper_;
  double inv_power_ = 1.0;
  std::vector<std::vector<double>> filters_;
};

}  // namespace

std::size_t frame_count(std::size_t sample_count, int sample_rate, double fps) {
  return static_cast<std::size_t>(std::ceil(static_cast<double>(sample_count) * fps / sample_rate));
}

AudioEmbeddingSequence featurize_audio(const AudioTrack& track, double fps, int d_a) {
  g_featurize_calls.fetch_add(1, std::memory_order_relaxed);
  if (track.samples.empty()) fail(ErrorCode::empty_audio, "audio track has no samples");
  if (track.sample_rate < 8000) fail(ErrorCode::invalid_argument, "sample rate must be >= 8000 Hz");
  if (!(fps >= 1.0 && fps <= 120.0)) fail(ErrorCode::invalid_argument, "fps must be in [1, 120]");
  if (d_a <= 0 || d_a % 2 != 0) {
    fail(ErrorCode::invalid_argument, "d_a must be a positive multiple of 2, got " + std::to_string(d_a));
  }

  const int bands = d_a / 2;
  const double hop = track.sample_rate / fps;
  const auto half = static_cast<std::size_t>(std::llround(hop));
  const std::size_t window = 2 * half;
  BandAnalyzer full(window, track.sample_rate, bands);
  BandAnalyzer part(half, track.sample_rate, bands);

  AudioEmbeddingSequence seq;
  seq.d_a = d_a;
  seq.fps = fps;
  const std::size_t n_frames = frame_count(track.samples.size(), track.sample_rate, fps);
  seq.values.resize(n_frames * static_cast<std::size_t>(d_a));

  std::vector<double> e_full(bands), e_early(bands), e_late(bands);
  for (std::size_t t = 0; t < n_frames; ++t) {
    const auto centre = static_cast<std::ptrdiff_t>(std::floor((static_cast<double>(t) + 0.5) * hop));
    const std::ptrdiff_t start = centre - static_cast<std::ptrdiff_t>(half);
    full.analyze(track.samples, start, e_full);
    part.analyze(track.samples, start, e_early);
    part.analyze(track.samples, start + static_cast<std::ptrdiff_t>(half), e_late);
    std::span<double> row = seq.row(t);
    for (int m = 0; m < bands; ++m) {
      row[m] = std::log(kFilterbankFloor + e_full[m]);
      row[bands + m] = std::log(kFilterbankFloor + e_late[m]) - std::log(kFilterbankFloor + e_early[m]);
    }
  }
  return seq;
}

std::uint64_t featurize_audio_invocations() { return g_featurize_calls.load(std::memory_order_relaxed); }

EmbeddingNormalizer EmbeddingNormalizer::identity(int d_a) {
  EmbeddingNormalizer n;
  n.mean.assign(static_cast<std::size_t>(d_a), 0.0);
  n.inv_scale.assign(static_cast<std::size_t>(d_a), 1.0);
  return n;
}

EmbeddingNormalizer EmbeddingNormalizer::fit(const AudioEmbeddingSequence& seq) {
  const std::size_t n = seq.frames();
  if (n == 0) fail(ErrorCode::empty_audio, "cannot fit a normalizer to zero frames");
  EmbeddingNormalizer norm = identity(seq.d_a);
  for (int k = 0; k < seq.d_a; ++k) {
    double mean = 0.0;
    for (std::size_t t = 0; t < n; ++t) mean += seq.row(t)[k];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t t = 0; t < n; ++t) var += (seq.row(t)[k] - mean) * (seq.row(t)[k] - mean);
    var /= static_cast<double>(n);
    norm.mean[k] = mean;
    // Near-constant dimensions are centred but not amplified.
    norm.inv_scale[k] = 1.0 / std::max(std::sqrt(var), 1.0);
  }
  return norm;
}

void EmbeddingNormalizer::apply(std::span<const double> in, std::span<double> out) const {
  require_size("embedding", mean.size(), in.size());
  require_size("normalized embedding", mean.size(), out.size());
  for (std::size_t k = 0; k < in.size(); ++k) out[k] = (in[k] - mean[k]) * inv_scale[k];
}

std::vector<double> EmbeddingNormalizer::apply(std::span<const double> in) const {
  std::vector<double> out(in.size());
  apply(in, out);
  return out;
}

}  // namespace trihead
