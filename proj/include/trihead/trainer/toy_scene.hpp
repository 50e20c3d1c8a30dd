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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "trihead/conditioning/audio.hpp"
#include "trihead/core/types.hpp"
#include "trihead/frame.hpp"
#include "trihead/keypoints.hpp"
#include "trihead/renderer/camera.hpp"

namespace trihead {

/// Analytic talking head: a soft ellipsoid with painted brows, eyes whose vertical
/// extent shrinks with blink B, and a lens-shaped mouth aperture opened by a in [0,1].
/// Features are painted orthographically along z on the front half.
struct ToyScene {
  Vec3 radii{0.55, 0.72, 0.5};
  double density = 60.0;
  double softness = 0.03;  // sigmoid width of the boundary, in normalized radius
  Vec3 albedo{0.85, 0.64, 0.52};
  Vec3 mouth_color{0.3, 0.06, 0.08};
  Vec3 sclera_color{0.95, 0.95, 0.92};
  Vec3 iris_color{0.15, 0.1, 0.08};
  Vec3 brow_color{0.25, 0.15, 0.1};
  double mouth_y = -0.35;
  double mouth_half_width = 0.2;
  double mouth_max_half_height = 0.12;
  double eye_x = 0.2;
  double eye_y = 0.18;
  double eye_radius = 0.085;
  bool features = true;

  /// Low-contrast variant with a wide boundary, for sampling-convergence checks.
  static ToyScene smooth();

  double sigma(const Vec3& x) const;
  Vec3 color(const Vec3& x, double a, double blink) const;

  /// L landmarks on the front surface: jaw, brows, nose, eyes, mouth in proportions
  /// 17:10:9:12:20 (exactly those counts at L = 68).
  std::vector<Vec3> keypoints(double a, double blink, int count = 68) const;
};

/// Landmark counts per group (jaw, brows, nose, eyes, mouth) for `count` landmarks.
std::array<int, 5> landmark_groups(int count);

KeypointSet project_keypoints(const Camera& camera, const std::vector<Vec3>& points);

struct GroundTruth {
  Frame frame;  // landmarks attached
  KeypointSet keypoints;
};

/// Renders the analytic scene with uniform samples and the renderer's compositing.
GroundTruth toy_ground_truth(const ToyScene& scene, const Camera& camera, double a, double blink,
                             int points = 256, int landmarks = 68, const Vec3& background = Vec3::Zero());

/// Harmonic voice-like carrier whose amplitude is 0.02 * 50^u on constant segments.
struct ToyAudio {
  AudioTrack track;
  double segment_seconds = 0.2;
  std::vector<double> loudness;  // u per segment, in [0,1]
};

ToyAudio make_toy_audio(double seconds, int sample_rate, std::uint64_t seed,
                        double segment_seconds = 0.2);

/// A constant-loudness track, used to calibrate the aperture map.
AudioTrack make_toy_tone(double seconds, int sample_rate, double loudness);

/// Maps an embedding to a mouth aperture by its mean log band energy, linearly between
/// calibrated quiet (u = 0) and loud (u = 1) levels, clamped to [0,1].
struct ApertureMap {
  double quiet = 0.0;
  double loud = 1.0;

  static ApertureMap calibrate(int sample_rate, double fps, int d_a);
  double operator()(std::span<const double> e_a) const;
};

}  // namespace trihead
