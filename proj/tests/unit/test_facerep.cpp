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

#include "doctest.h"

#include <Eigen/Geometry>
#include <cmath>

#include "support/oracles.hpp"
#include "trihead/core/error.hpp"
#include "trihead/core/rng.hpp"
#include "trihead/facerep/motion.hpp"
#include "trihead/facerep/synthesize.hpp"
#include "trihead/facerep/warp.hpp"
#include "trihead/trainer/detect.hpp"
#include "trihead/trainer/metrics.hpp"
#include "trihead/trainer/toy_scene.hpp"

using namespace trihead;

namespace {

KeypointSet random_keypoints(Rng& rng, int n, double lo = 0.2, double hi = 0.8) {
  KeypointSet kp;
  for (int i = 0; i < n; ++i) kp.points.emplace_back(rng.uniform(lo, hi), rng.uniform(lo, hi));
  return kp;
}

Mat3 random_rotation(Rng& rng) {
  const Eigen::Quaterniond q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
  return q.normalized().toRotationMatrix();
}

Frame random_frame(Rng& rng, int w, int h) {
  Frame f(w, h);
  for (double& v : f.rgb) v = rng.uniform();
  return f;
}

}  // namespace

TEST_CASE("self alignment is the identity") {
  Rng rng(1);
  const KeypointSet kp = random_keypoints(rng, 68);
  const Frame f(16, 16);
  const MotionParams m = extract_motion(f, f, &kp, &kp);
  CHECK(std::abs(m.scale - 1.0) < 1e-12);
  CHECK((m.rotation - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(m.translation.norm() < 1e-12);
  for (const Vec3& d : m.delta) CHECK(d.norm() < 1e-12);
}

TEST_CASE("scaling about the centroid is recovered as pure scale") {
  Rng rng(2);
  std::vector<Vec3> src;
  for (int i = 0; i < 40; ++i) src.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
  Vec3 c = Vec3::Zero();
  for (const Vec3& p : src) c += p / 40.0;
  std::vector<Vec3> dst;
  for (const Vec3& p : src) dst.push_back(c + 2.0 * (p - c));
  const Similarity s = align_similarity(src, dst);
  CHECK(std::abs(s.scale - 2.0) < 1e-9);
  CHECK((s.rotation - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-9);
  for (std::size_t i = 0; i < src.size(); ++i) CHECK((s.apply(src[i]) - dst[i]).norm() < 1e-9);
}

TEST_CASE("Procrustes recovers random similarity transforms") {
  Rng rng(3);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Vec3> src;
    for (int i = 0; i < 68; ++i) src.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const double scale = rng.uniform(0.3, 3.0);
    const Mat3 rot = random_rotation(rng);
    const Vec3 t(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
    std::vector<Vec3> dst;
    for (const Vec3& p : src) dst.push_back(scale * rot * p + t);
    const Similarity s = align_similarity(src, dst);
    worst = std::max({worst, std::abs(s.scale - scale), (s.rotation - rot).cwiseAbs().maxCoeff(),
                      (s.translation - t).cwiseAbs().maxCoeff()});
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("collinear keypoints are degenerate") {
  KeypointSet kp;
  for (int i = 0; i < 10; ++i) kp.points.emplace_back(0.1 + 0.05 * i, 0.2 + 0.03 * i);
  const Frame f(8, 8);
  try {
    extract_motion(f, f, &kp, &kp);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_landmarks);
  }
}

TEST_CASE("frames without keypoints need keypoint files") {
  const Frame f(8, 8);
  try {
    extract_motion(f, f);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::keypoints_required);
  }
}

TEST_CASE("motion from a rendered frame uses its attached landmarks") {
  Rng rng(4);
  Frame o(8, 8), r(8, 8);
  o.landmarks = random_keypoints(rng, 20);
  r.landmarks = random_keypoints(rng, 20);
  const MotionParams a = extract_motion(o, r);
  const MotionParams b = extract_motion(o, r, &*o.landmarks, &*r.landmarks);
  CHECK(a.scale == b.scale);
  CHECK(a.delta == b.delta);
}

TEST_CASE("identity motion projects the canonical keypoints") {
  Rng rng(5);
  const KeypointSet kp = random_keypoints(rng, 68, 0.0, 1.0);
  MotionParams m;
  m.canonical = lift_keypoints(kp, 1.0);
  m.delta.assign(68, Vec3::Zero());
  CHECK(transform_keypoints(m) == kp);
}

TEST_CASE("translation shifts every keypoint") {
  Rng rng(6);
  const KeypointSet kp = random_keypoints(rng, 30);
  MotionParams m;
  m.canonical = lift_keypoints(kp, 1.0);
  m.delta.assign(30, Vec3::Zero());
  m.translation = Vec3(0.1, 0, 0);
  const KeypointSet out = transform_keypoints(m);
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(std::abs(out.points[i].x() - kp.points[i].x() - 0.1) < 1e-15);
    CHECK(out.points[i].y() == kp.points[i].y());
  }
}

TEST_CASE("transform_keypoints matches a scratch evaluation and clamps") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    MotionParams m;
    m.scale = rng.uniform(0.5, 1.5);
    m.rotation = random_rotation(rng);
    m.translation = Vec3(rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2));
    for (int i = 0; i < 10; ++i) {
      m.canonical.emplace_back(rng.uniform(0, 1.5), rng.uniform(0, 1), rng.uniform(-0.1, 0.1));
      m.delta.emplace_back(rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05), 0.0);
    }
    ClampCounter clamps;
    const KeypointSet out = transform_keypoints(m, 1.5, &clamps);
    std::uint64_t expected_clamps = 0;
    for (int i = 0; i < 10; ++i) {
      const Vec3 x = m.scale * (m.rotation * (m.canonical[static_cast<std::size_t>(i)] + m.delta[static_cast<std::size_t>(i)])) + m.translation;
      const double u = x.x() / 1.5, v = x.y();
      if (u < 0 || u > 1 || v < 0 || v > 1) ++expected_clamps;
      CHECK(std::abs(out.points[static_cast<std::size_t>(i)].x() - std::clamp(u, 0.0, 1.0)) < 1e-14);
      CHECK(std::abs(out.points[static_cast<std::size_t>(i)].y() - std::clamp(v, 0.0, 1.0)) < 1e-14);
    }
    CHECK(clamps.count == expected_clamps);
  }
}

TEST_CASE("retargeting drops the pose and keeps the expression") {
  Rng rng(8);
  MotionParams m;
  m.scale = 1.3;
  m.rotation = random_rotation(rng);
  m.translation = Vec3(0.1, 0.2, 0.3);
  m.canonical.assign(5, Vec3(0.5, 0.5, 0));
  m.delta.assign(5, Vec3(0.01, 0.02, 0));
  const MotionParams r = retarget(m);
  CHECK(r.scale == 1.0);
  CHECK(r.rotation == Mat3::Identity());
  CHECK(r.translation == Vec3::Zero());
  CHECK(r.delta == m.delta);
  CHECK(r.canonical == m.canonical);
}

TEST_CASE("stitching blends by the mask value") {
  Rng rng(9);
  const KeypointSet xp = random_keypoints(rng, 12), xr = random_keypoints(rng, 12);
  CHECK(stitch_keypoints(xp, xr, FaceRegionMask::constant(32, 32, 1.0)) == xp);
  CHECK(stitch_keypoints(xp, xr, FaceRegionMask::constant(32, 32, 0.0)) == xr);
  const KeypointSet mid = stitch_keypoints(xp, xr, FaceRegionMask::constant(32, 32, 0.5));
  for (std::size_t i = 0; i < 12; ++i) CHECK((mid.points[i] - 0.5 * (xp.points[i] + xr.points[i])).norm() < 1e-15);
  CHECK_THROWS_AS(stitch_keypoints(xp, random_keypoints(rng, 11), FaceRegionMask::constant(32, 32, 1.0)), Error);
}

TEST_CASE("fitted masks are 1 inside, 0 far outside and within [0, 1]") {
  Rng rng(10);
  const KeypointSet kp = random_keypoints(rng, 68, 0.3, 0.7);
  const FaceRegionMask m = fit_face_mask(kp, 64, 64);
  for (double v : m.values) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(m.sample(Vec2(0.5, 0.5)) == 1.0);
  CHECK(m.at(0, 0) == 0.0);
  for (const Vec2& p : kp.points) CHECK(m.sample(p) > 0.0);
}

TEST_CASE("warp field closed forms") {
  Rng rng(11);
  const KeypointSet src = random_keypoints(rng, 25);
  SUBCASE("equal keypoints give zero") {
    for (double v : build_warp(src, src, 32, 24, 3.0).disp) CHECK(v == 0.0);
  }
  SUBCASE("a constant offset is reproduced exactly everywhere") {
    // Dyadic keypoints keep every offset exactly representable.
    KeypointSet grid = src;
    for (Vec2& p : grid.points) p = (p * 256.0).array().round().matrix() / 256.0;
    KeypointSet dst = grid;
    for (Vec2& p : dst.points) p += Vec2(0.125, -0.0625);
    const WarpField w = build_warp(grid, dst, 32, 24, 3.0);
    const Vec2 expected(0.125 * 32, -0.0625 * 24);
    for (int r = 0; r < 24; ++r)
      for (int c = 0; c < 32; ++c) CHECK(w.at(r, c) == expected);
  }
  SUBCASE("a constant offset on arbitrary keypoints is constant to rounding") {
    KeypointSet dst = src;
    for (Vec2& p : dst.points) p += Vec2(0.1, -0.07);
    const WarpField w = build_warp(src, dst, 32, 24, 3.0);
    const Vec2 expected(0.1 * 32, -0.07 * 24);
    for (int r = 0; r < 24; ++r)
      for (int c = 0; c < 32; ++c) CHECK((w.at(r, c) - expected).lpNorm<Eigen::Infinity>() < 1e-12);
  }
  SUBCASE("one keypoint moves every pixel by its displacement") {
    KeypointSet a{{Vec2(0.3, 0.4)}}, b{{Vec2(0.35, 0.3)}};
    const WarpField w = build_warp(a, b, 20, 20, 1.0);
    const Vec2 d = to_pixel(b.points[0], 20, 20) - to_pixel(a.points[0], 20, 20);
    for (int r = 0; r < 20; ++r)
      for (int c = 0; c < 20; ++c) CHECK((w.at(r, c) - d).norm() < 1e-12);
  }
}

TEST_CASE("warp matches the normalized Gaussian RBF formula") {
  Rng rng(12);
  const KeypointSet src = random_keypoints(rng, 10), dst = random_keypoints(rng, 10);
  const double b = 4.0;
  const WarpField w = build_warp(src, dst, 24, 24, b);
  for (int r = 0; r < 24; r += 5) {
    for (int c = 0; c < 24; c += 3) {
      Vec2 num = Vec2::Zero();
      double den = 0.0;
      for (std::size_t i = 0; i < 10; ++i) {
        const Vec2 s = to_pixel(src.points[i], 24, 24), d = to_pixel(dst.points[i], 24, 24);
        const double wt = std::exp(-(Vec2(c, r) - s).squaredNorm() / (2 * b * b));
        num += wt * (d - s);
        den += wt;
      }
      CHECK((w.at(r, c) - num / den).norm() < 1e-9);
    }
  }
}

TEST_CASE("warp values move with the keypoints") {
  Rng rng(13);
  const KeypointSet src = random_keypoints(rng, 8, 0.35, 0.55), dst = random_keypoints(rng, 8, 0.35, 0.55);
  KeypointSet src2 = src, dst2 = dst;
  const int shift = 6;
  for (Vec2& p : src2.points) p.x() += shift / 64.0;
  for (Vec2& p : dst2.points) p.x() += shift / 64.0;
  const double b = 2.0;
  const WarpField a = build_warp(src, dst, 64, 64, b), t = build_warp(src2, dst2, 64, 64, b);
  for (int r = 6; r < 58; ++r)
    for (int c = 6; c < 52; ++c) CHECK((a.at(r, c) - t.at(r, c + shift)).norm() < 1e-12);
}

TEST_CASE("apply_warp") {
  Rng rng(14);
  const Frame f = random_frame(rng, 17, 13);
  SUBCASE("zero field is the identity") { CHECK(apply_warp(f, WarpField::zero(17, 13)).rgb == f.rgb); }
  SUBCASE("one-pixel shift moves a vertical edge") {
    Frame edge(10, 6);
    for (int r = 0; r < 6; ++r)
      for (int c = 5; c < 10; ++c)
        for (int ch = 0; ch < 3; ++ch) edge.at(r, c, ch) = 1.0;
    WarpField w = WarpField::zero(10, 6);
    for (std::size_t i = 0; i < w.disp.size(); i += 2) w.disp[i] = 1.0;
    const Frame out = apply_warp(edge, w);
    Frame shifted(10, 6);
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 10; ++c)
        for (int ch = 0; ch < 3; ++ch) shifted.at(r, c, ch) = edge.at(r, std::max(c - 1, 0), ch);
    CHECK(out.rgb == shifted.rgb);
  }
  SUBCASE("smooth field matches per-pixel bilinear resampling") {
    WarpField w = WarpField::zero(17, 13);
    for (int r = 0; r < 13; ++r) {
      for (int c = 0; c < 17; ++c) {
        const std::size_t i = (static_cast<std::size_t>(r) * 17 + c) * 2;
        w.disp[i] = 2.5 * std::sin(0.3 * r + 0.1 * c);
        w.disp[i + 1] = -1.7 * std::cos(0.2 * c);
      }
    }
    const Frame out = apply_warp(f, w);
    double worst = 0.0;
    for (int r = 0; r < 13; ++r) {
      for (int c = 0; c < 17; ++c) {
        const Vec3 ref = oracle::bilinear(f, c - w.at(r, c).x(), r - w.at(r, c).y());
        for (int ch = 0; ch < 3; ++ch) worst = std::max(worst, std::abs(out.at(r, c, ch) - ref[ch]));
      }
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("identity motion, full mask and identity decoder reproduce the frame bit-exactly") {
  Rng rng(15);
  const Frame o = random_frame(rng, 24, 20), ref = random_frame(rng, 24, 20);
  const KeypointSet kp = random_keypoints(rng, 68);
  MotionParams m;
  m.canonical = lift_keypoints(kp, 1.0);
  m.delta.assign(68, Vec3::Zero());
  const KeypointSet xp = transform_keypoints(m);
  const Frame out = synthesize(o, ref, xp, kp, make_identity_decoder(16, 3), FaceRegionMask::constant(24, 20, 1.0), 2.0);
  CHECK(out.rgb == o.rgb);
}

TEST_CASE("an empty mask returns the reference") {
  Rng rng(16);
  const Frame o = random_frame(rng, 12, 12), ref = random_frame(rng, 12, 12);
  const KeypointSet a = random_keypoints(rng, 5), b = random_keypoints(rng, 5);
  const Frame out = synthesize(o, ref, a, b, make_identity_decoder(8, 1), FaceRegionMask::constant(12, 12, 0.0), 2.0);
  CHECK(out.rgb == ref.rgb);
}

TEST_CASE("synthesize rejects mismatched sizes") {
  const Frame o(12, 12), ref(10, 12);
  const KeypointSet a{{Vec2(0.5, 0.5)}};
  CHECK_THROWS_AS(synthesize(o, ref, a, a, make_identity_decoder(8, 1), FaceRegionMask::constant(12, 12, 1.0), 2.0), Error);
}

TEST_CASE("a transferred open mouth lands closer to the open-mouth landmarks") {
  const ToyScene scene;
  const int side = 64;
  const Camera cam = Camera::orbit(0.0, 0.0, 2.6, 1.5, side, side);
  const GroundTruth open = toy_ground_truth(scene, cam, 1.0, 0.0, 128);
  const GroundTruth closed = toy_ground_truth(scene, cam, 0.0, 0.0, 128);
  const ReplacementResult r = replace_face(open.frame, closed.frame, make_identity_decoder(16, 2));
  const double before = metric_lmd(closed.keypoints, open.keypoints, side, side);
  const double stitched = metric_lmd(r.keypoints, open.keypoints, side, side);
  const KeypointFit fit = detect_keypoints(r.frame, scene, cam, 68, Vec3::Zero(), 64);
  const double detected = metric_lmd(fit.keypoints, open.keypoints, side, side);
  CHECK(stitched < before);
  CHECK(detected < before);
}
