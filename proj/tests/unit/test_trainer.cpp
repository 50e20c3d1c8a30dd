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

#include <cmath>
#include <filesystem>
#include <fstream>

#include "support/gradient_suite.hpp"
#include "trihead/core/error.hpp"
#include "trihead/core/rng.hpp"
#include "trihead/io/checkpoint.hpp"
#include "trihead/trainer/dataset.hpp"
#include "trihead/trainer/detect.hpp"
#include "trihead/trainer/metrics.hpp"
#include "trihead/trainer/toy_scene.hpp"
#include "trihead/trainer/train.hpp"

using namespace trihead;

namespace {

TrainConfig tiny_config() {
  TrainConfig tc;
  tc.width = tc.height = 16;
  tc.points = 16;
  tc.iterations = 40;
  tc.rays_per_batch = 64;
  tc.train_views = 6;
  tc.heldout_views = 2;
  tc.gt_points = 64;
  tc.audio_seconds = 1.0;
  tc.log_every = 10;
  return tc;
}

Vec3 pixel_color(const Frame& f, const Vec2& px) {
  const int c = static_cast<int>(std::floor(px.x())), r = static_cast<int>(std::floor(px.y()));
  return Vec3(f.at(r, c, 0), f.at(r, c, 1), f.at(r, c, 2));
}

}  // namespace

TEST_CASE("closed mouth shows the head albedo at the mouth") {
  const ToyScene scene;
  const Camera cam = Camera::orbit(0, 0, 2.6, 1.5, 64, 64);
  const GroundTruth gt = toy_ground_truth(scene, cam, 0.0, 0.0, 256);
  const Vec3 front(0.0, scene.mouth_y, scene.radii.z() * std::sqrt(1.0 - std::pow(scene.mouth_y / scene.radii.y(), 2)));
  const Vec3 c = pixel_color(gt.frame, cam.project(front));
  CHECK((c - scene.albedo).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("open mouth darkens the mouth interior") {
  const ToyScene scene;
  const Camera cam = Camera::orbit(0, 0, 2.6, 1.5, 64, 64);
  const GroundTruth gt = toy_ground_truth(scene, cam, 1.0, 0.0, 256);
  const Vec3 front(0.0, scene.mouth_y, scene.radii.z() * std::sqrt(1.0 - std::pow(scene.mouth_y / scene.radii.y(), 2)));
  const Vec3 c = pixel_color(gt.frame, cam.project(front));
  CHECK((c - scene.mouth_color).cwiseAbs().maxCoeff() < 1e-3);
  CHECK(c.sum() < scene.albedo.sum());
}

TEST_CASE("ground truth is deterministic and carries its landmarks") {
  const ToyScene scene;
  const Camera cam = Camera::orbit(10, -5, 2.6, 1.5, 24, 24);
  const GroundTruth a = toy_ground_truth(scene, cam, 0.4, 0.6, 64);
  const GroundTruth b = toy_ground_truth(scene, cam, 0.4, 0.6, 64);
  CHECK(a.frame.rgb == b.frame.rgb);
  REQUIRE(a.frame.landmarks.has_value());
  CHECK(*a.frame.landmarks == a.keypoints);
  CHECK(a.keypoints.size() == 68);
}

TEST_CASE("landmark groups follow the 68-point layout") {
  CHECK(landmark_groups(68) == std::array<int, 5>{17, 10, 9, 12, 20});
  for (int L : {25, 50, 100, 200}) {
    const auto g = landmark_groups(L);
    CHECK(g[0] + g[1] + g[2] + g[3] + g[4] == L);
    CHECK(ToyScene{}.keypoints(0.5, 0.5, L).size() == static_cast<std::size_t>(L));
  }
}

TEST_CASE("keypoints move with the aperture and blink") {
  const ToyScene s;
  const std::vector<Vec3> closed = s.keypoints(0.0, 0.0), open = s.keypoints(1.0, 0.0), blink = s.keypoints(0.0, 1.0);
  CHECK(closed != open);
  CHECK(closed != blink);
  // Brows and nose do not move; the jaw drops with the mouth.
  for (int i = 17; i < 36; ++i) {
    CHECK(closed[static_cast<std::size_t>(i)] == open[static_cast<std::size_t>(i)]);
    CHECK(closed[static_cast<std::size_t>(i)] == blink[static_cast<std::size_t>(i)]);
  }
  CHECK(closed[8].y() > open[8].y());
}

TEST_CASE("photometric loss") {
  const std::vector<double> a{0.1, 0.2, 0.3, 0.4};
  CHECK(photometric_loss(a, a).loss == 0.0);
  std::vector<double> b = a;
  for (double& v : b) v += 0.5;
  CHECK(photometric_loss(b, a).loss == doctest::Approx(0.25).epsilon(1e-15));
  Rng rng(3);
  std::vector<double> p(300), t(300);
  for (double& v : p) v = rng.uniform();
  for (double& v : t) v = rng.uniform();
  long double s = 0;
  for (std::size_t i = 0; i < 300; ++i) s += static_cast<long double>(p[i] - t[i]) * (p[i] - t[i]);
  const PhotometricLoss l = photometric_loss(p, t);
  CHECK(std::abs(l.loss - static_cast<double>(s / 300)) < 1e-14);
  for (std::size_t i = 0; i < 300; ++i) CHECK(std::abs(l.grad[i] - 2 * (p[i] - t[i]) / 300) < 1e-16);
  CHECK_THROWS_AS(photometric_loss(p, std::vector<double>(3)), Error);
}

TEST_CASE("psnr") {
  const Frame a(8, 8, 0.3);
  CHECK(metric_psnr(a, a) == kPsnrIdentical);
  CHECK(std::abs(metric_psnr(Frame(8, 8, 0.2), Frame(8, 8, 0.3)) - 20.0) < 1e-9);
  CHECK_THROWS_AS(metric_psnr(Frame(8, 8), Frame(4, 8)), Error);
}

TEST_CASE("psnr falls as noise grows") {
  Rng rng(4);
  Frame base(32, 32);
  for (double& v : base.rgb) v = rng.uniform(0.2, 0.8);
  std::vector<double> noise(base.rgb.size());
  for (double& n : noise) n = rng.uniform(-1, 1);
  double last = kPsnrIdentical;
  for (double amp : {0.01, 0.02, 0.05, 0.1, 0.2}) {
    Frame noisy = base;
    for (std::size_t i = 0; i < noisy.rgb.size(); ++i) noisy.rgb[i] += amp * noise[i];
    const double p = metric_psnr(base, noisy);
    CHECK(p < last);
    last = p;
  }
}

TEST_CASE("lmd") {
  KeypointSet a{{Vec2(0.1, 0.2), Vec2(0.5, 0.5)}};
  CHECK(metric_lmd(a, a, 64, 64) == 0.0);
  KeypointSet b = a;
  for (Vec2& p : b.points) p += Vec2(3.0 / 64, 4.0 / 64);
  CHECK(std::abs(metric_lmd(a, b, 64, 64) - 5.0) < 1e-12);
  CHECK_THROWS_AS(metric_lmd(a, KeypointSet{{Vec2(0, 0)}}, 64, 64), Error);
}

TEST_CASE("the detector recovers aperture and blink from a clean render") {
  const ToyScene scene;
  const Camera cam = Camera::orbit(8, 4, 2.6, 1.5, 64, 64);
  const GroundTruth gt = toy_ground_truth(scene, cam, 0.63, 0.41, 128);
  const KeypointFit fit = detect_keypoints(gt.frame, scene, cam, 68, Vec3::Zero(), 128);
  CHECK(std::abs(fit.aperture - 0.63) < 0.03);
  CHECK(std::abs(fit.blink - 0.41) < 0.05);
  CHECK(metric_lmd(fit.keypoints, gt.keypoints, 64, 64) < 0.5);
}

TEST_CASE("the toy aperture map follows loudness") {
  const ApertureMap map = ApertureMap::calibrate(16000, 25.0, 32);
  double last = -1.0;
  for (double u : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const AudioEmbeddingSequence e = featurize_audio(make_toy_tone(1.0, 16000, u), 25.0, 32);
    const double a = map(e.row(12));
    CHECK(a >= last);
    last = a;
  }
  CHECK(map(featurize_audio(make_toy_tone(1.0, 16000, 0.0), 25.0, 32).row(12)) < 0.05);
  CHECK(map(featurize_audio(make_toy_tone(1.0, 16000, 1.0), 25.0, 32).row(12)) > 0.95);
}

TEST_CASE("every trainable component passes central differences") {
  for (const oracle::ComponentCheck& c : oracle::gradient_suite(7)) {
    CAPTURE(c.name);
    CHECK(c.checked > 0);
    CHECK(c.max_relative_error < 1e-4);
  }
}

TEST_CASE("zero iterations return the initialization") {
  TrainConfig tc = tiny_config();
  tc.iterations = 0;
  const Dataset data = build_dataset(tc, ToyScene{});
  const TrainResult r = train(tc, data);
  Model init = Model::create(tc.model);
  init.normalizer = EmbeddingNormalizer::fit(data.embeddings);
  CHECK(r.model.parameters() == init.parameters());
  CHECK(r.log.empty());
}

TEST_CASE("training is deterministic") {
  const TrainConfig tc = tiny_config();
  const Dataset a = build_dataset(tc, ToyScene{});
  const Dataset b = build_dataset(tc, ToyScene{});
  CHECK(a.train[3].target.rgb == b.train[3].target.rgb);
  const TrainResult ra = train(tc, a), rb = train(tc, b);
  CHECK(io::encode_checkpoint(ra.model) == io::encode_checkpoint(rb.model));
  REQUIRE(ra.log.size() == 4);
  CHECK(ra.log[1].iteration == 10);
}

TEST_CASE("loss at iteration 2000 is below the initial loss") {
  TrainConfig tc;
  tc.iterations = 2001;
  tc.log_every = 2000;
  tc.heldout_views = 0;
  const Dataset data = build_dataset(tc, ToyScene{});
  const TrainResult r = train(tc, data);
  REQUIRE(r.log.size() == 2);
  CHECK(r.log[1].iteration == 2000);
  CHECK(r.log[1].loss < r.log[0].loss);
}

TEST_CASE("a runaway learning rate is reported as divergence") {
  TrainConfig tc = tiny_config();
  tc.iterations = 400;
  tc.lr_networks = 50.0;
  tc.lr_tables = 50.0;
  tc.divergence_factor = 1.5;
  tc.divergence_patience = 5;
  const Dataset data = build_dataset(tc, ToyScene{});
  try {
    train(tc, data);
    FAIL("no divergence reported");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::divergence || e.code() == ErrorCode::non_finite));
  }
}

TEST_CASE("loss log has the documented columns") {
  const std::string path = (std::filesystem::temp_directory_path() / "trihead_loss.csv").string();
  write_loss_log(path, {{0, 0.5, 3.0}, {100, 0.25, 6.0}});
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "iteration,loss,psnr_probe");
  std::filesystem::remove(path);
}
