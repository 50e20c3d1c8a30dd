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

#include "trihead/trainer/toy_scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "trihead/core/error.hpp"
#include "trihead/core/rng.hpp"
#include "trihead/renderer/sampling.hpp"

namespace trihead {

namespace {

double smoothstep(double e0, double e1, double x) {
  const double t = std::clamp((x - e0) / (e1 - e0), 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

Vec3 mix(const Vec3& a, const Vec3& b, double w) { return a + w * (b - a); }

double brow_y(double ax) {
  const double t = (ax - 0.2) / 0.1;
  return 0.3 + 0.03 * (1.0 - t * t);
}

}  // namespace

ToyScene ToyScene::smooth() {
  ToyScene s;
  s.density = 8.0;
  s.softness = 0.2;
  return s;
}

double ToyScene::sigma(const Vec3& x) const {
  const double q = x.cwiseQuotient(radii).norm();
  return density / (1.0 + std::exp(-(1.0 - q) / softness));
}

Vec3 ToyScene::color(const Vec3& x, double a, double blink) const {
  Vec3 c = albedo;
  if (!features) return c;
  const double front = smoothstep(0.0, 0.15, x.z());
  if (front <= 0.0) return c;
  const double ax = std::abs(x.x());

  const double brow = (1.0 - smoothstep(0.012, 0.03, std::abs(x.y() - brow_y(ax)))) *
                      smoothstep(0.09, 0.12, ax) * (1.0 - smoothstep(0.28, 0.31, ax));
  c = mix(c, brow_color, front * brow);

  const double open = std::max(1.0 - blink, 1e-3);
  const double ex = x.x() - std::copysign(eye_x, x.x());
  const double ey = x.y() - eye_y;
  const double rho = std::sqrt(ex * ex / (eye_radius * eye_radius) +
                               ey * ey / (eye_radius * eye_radius * open * open));
  const double eye = (1.0 - smoothstep(0.8, 1.0, rho)) * smoothstep(0.0, 0.1, 1.0 - blink);
  const double iris = 1.0 - smoothstep(0.035, 0.05, std::sqrt(ex * ex + ey * ey));
  c = mix(c, mix(sclera_color, iris_color, iris), front * eye);

  const double tx = x.x() / mouth_half_width;
  if (std::abs(tx) < 1.0) {
    const double h = mouth_max_half_height * a * (1.0 - tx * tx);
    const double inside = std::clamp((h - std::abs(x.y() - mouth_y)) / 0.015, 0.0, 1.0);
    c = mix(c, mouth_color, front * inside * inside * (3.0 - 2.0 * inside));
  }
  return c;
}

std::array<int, 5> landmark_groups(int count) {
  constexpr std::array<int, 5> base{17, 10, 9, 12, 20};
  if (count < 5) fail(ErrorCode::invalid_argument, "toy keypoints need L >= 5");
  std::array<int, 5> g{};
  int used = 0;
  for (int i = 0; i < 4; ++i) {
    g[i] = std::max(1, static_cast<int>(std::lround(count * base[i] / 68.0)));
    used += g[i];
  }
  g[4] = count - used;
  if (g[4] < 1) fail(ErrorCode::invalid_argument, "toy keypoints need L >= 5");
  return g;
}

std::vector<Vec3> ToyScene::keypoints(double a, double blink, int count) const {
  const std::array<int, 5> g = landmark_groups(count);
  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(count));
  const double pi = std::numbers::pi;
  auto frac = [](int j, int n) { return n > 1 ? static_cast<double>(j) / (n - 1) : 0.5; };

  for (int j = 0; j < g[0]; ++j) {
    const double th = (-160.0 + 140.0 * frac(j, g[0])) * pi / 180.0;
    pts.emplace_back(0.92 * radii.x() * std::cos(th),
                     0.92 * radii.y() * std::sin(th) + 0.03 * a * std::sin(th));
  }
  const int brows_left = (g[1] + 1) / 2;
  for (int j = 0; j < g[1]; ++j) {
    const bool left = j < brows_left;
    const int m = left ? brows_left : g[1] - brows_left;
    const double ax = m > 1 ? 0.1 + 0.2 * frac(left ? j : j - brows_left, m) : 0.2;
    pts.emplace_back(left ? -ax : ax, brow_y(ax));
  }
  const int bridge = (g[2] + 1) / 2;
  for (int j = 0; j < g[2]; ++j) {
    if (j < bridge) {
      pts.emplace_back(0.0, 0.12 - 0.22 * frac(j, bridge));
    } else {
      pts.emplace_back(-0.08 + 0.16 * frac(j - bridge, g[2] - bridge), -0.17);
    }
  }
  const int eyes_left = (g[3] + 1) / 2;
  for (int j = 0; j < g[3]; ++j) {
    const bool left = j < eyes_left;
    const int m = left ? eyes_left : g[3] - eyes_left;
    const double phi = 2.0 * pi * (left ? j : j - eyes_left) / m;
    pts.emplace_back((left ? -eye_x : eye_x) + eye_radius * std::cos(phi),
                     eye_y + eye_radius * (1.0 - blink) * std::sin(phi));
  }
  const int outer = std::max(1, static_cast<int>(std::ceil(0.6 * g[4])));
  for (int j = 0; j < g[4]; ++j) {
    if (j < outer) {
      const double phi = 2.0 * pi * j / outer;
      const double s = std::sin(phi);
      pts.emplace_back(mouth_half_width * std::cos(phi),
                       mouth_y + s * std::abs(s) * (mouth_max_half_height * a + 0.035));
    } else {
      const int inner = g[4] - outer;
      const double phi = 2.0 * pi * (j - outer + 0.5) / inner;
      const double s = std::sin(phi);
      pts.emplace_back(0.9 * mouth_half_width * std::cos(phi), mouth_y + s * std::abs(s) * mouth_max_half_height * a);
    }
  }

  std::vector<Vec3> out;
  out.reserve(pts.size());
  for (const Vec2& p : pts) {
    const double r2 = (p.x() / radii.x()) * (p.x() / radii.x()) + (p.y() / radii.y()) * (p.y() / radii.y());
    out.emplace_back(p.x(), p.y(), radii.z() * std::sqrt(std::max(0.0, 1.0 - r2)));
  }
  return out;
}

KeypointSet project_keypoints(const Camera& camera, const std::vector<Vec3>& points) {
  KeypointSet kp;
  kp.points.reserve(points.size());
  for (const Vec3& p : points) {
    const Vec2 px = camera.project(p);
    kp.points.emplace_back(px.x() / camera.width, px.y() / camera.height);
  }
  return kp;
}

GroundTruth toy_ground_truth(const ToyScene& scene, const Camera& camera, double a, double blink,
                             int points, int landmarks, const Vec3& background) {
  camera.validate();
  if (points < 2) fail(ErrorCode::invalid_argument, "toy_ground_truth needs P >= 2");
  GroundTruth gt;
  gt.frame = Frame(camera.width, camera.height);
#pragma omp parallel
  {
    std::vector<double> depth(points), delta(points);
#pragma omp for schedule(static)
    for (int r = 0; r < camera.height; ++r) {
      for (int c = 0; c < camera.width; ++c) {
        const Vec3 dir = pixel_direction(camera, r, c);
        sample_depths(camera.near, camera.far, SampleMode::uniform, {}, depth, delta);
        double t = 1.0;
        Vec3 acc = Vec3::Zero();
        for (int k = 0; k < points; ++k) {
          const Vec3 x = camera.position + depth[k] * dir;
          const double s = scene.sigma(x);
          const double keep = std::exp(-s * delta[k]);
          const double w = t * (1.0 - keep);
          if (w > 0.0) acc += w * scene.color(x, a, blink);
          t *= keep;
        }
        acc += t * background;
        for (int ch = 0; ch < 3; ++ch) gt.frame.at(r, c, ch) = std::clamp(acc[ch], 0.0, 1.0);
      }
    }
  }
  gt.keypoints = project_keypoints(camera, scene.keypoints(a, blink, landmarks));
  gt.frame.landmarks = gt.keypoints;
  return gt;
}

namespace {

double toy_carrier(double t, const std::array<double, 16>& phase) {
  constexpr double f0 = 130.0;
  double v = 0.0;
  for (int h = 1; h <= 16; ++h) v += std::sin(2.0 * std::numbers::pi * h * f0 * t + phase[h - 1]) / h;
  return v / 3.5;
}

double envelope(double u) { return 0.02 * std::pow(50.0, u); }

}  // namespace

ToyAudio make_toy_audio(double seconds, int sample_rate, std::uint64_t seed, double segment_seconds) {
  if (!(seconds > 0.0) || !(segment_seconds > 0.0)) fail(ErrorCode::invalid_argument, "toy audio duration");
  Rng rng(seed);
  ToyAudio out;
  out.segment_seconds = segment_seconds;
  const std::size_t segments = static_cast<std::size_t>(std::ceil(seconds / segment_seconds));
  for (std::size_t k = 0; k < segments; ++k) out.loudness.push_back(rng.uniform());
  std::array<double, 16> phase{};
  for (double& p : phase) p = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const std::size_t n = static_cast<std::size_t>(std::llround(seconds * sample_rate));
  out.track.sample_rate = sample_rate;
  out.track.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    const std::size_t seg = std::min(segments - 1, static_cast<std::size_t>(t / segment_seconds));
    const double noise = 0.05 * (2.0 * rng.uniform() - 1.0);
    out.track.samples[i] = std::clamp(envelope(out.loudness[seg]) * (toy_carrier(t, phase) + noise), -1.0, 1.0);
  }
  return out;
}

AudioTrack make_toy_tone(double seconds, int sample_rate, double loudness) {
  std::array<double, 16> phase{};
  AudioTrack track;
  track.sample_rate = sample_rate;
  const std::size_t n = static_cast<std::size_t>(std::llround(seconds * sample_rate));
  track.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    track.samples[i] = envelope(loudness) * toy_carrier(static_cast<double>(i) / sample_rate, phase);
  }
  return track;
}

ApertureMap ApertureMap::calibrate(int sample_rate, double fps, int d_a) {
  auto level = [&](double u) {
    const AudioEmbeddingSequence seq = featurize_audio(make_toy_tone(2.0, sample_rate, u), fps, d_a);
    // Interior frames only; the edge windows run past the track.
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t t = 2; t + 2 < seq.frames(); ++t) {
      const auto row = seq.row(t);
      for (int d = 0; d < d_a / 2; ++d) sum += row[d];
      count += static_cast<std::size_t>(d_a / 2);
    }
    return sum / static_cast<double>(count);
  };
  ApertureMap map;
  map.quiet = level(0.0);
  map.loud = level(1.0);
  if (!(map.loud > map.quiet)) fail(ErrorCode::non_finite, "aperture calibration is degenerate");
  return map;
}

double ApertureMap::operator()(std::span<const double> e_a) const {
  const std::size_t half = e_a.size() / 2;
  double sum = 0.0;
  for (std::size_t d = 0; d < half; ++d) sum += e_a[d];
  const double m = sum / static_cast<double>(half);
  return std::clamp((m - quiet) / (loud - quiet), 0.0, 1.0);
}

}  // namespace trihead
