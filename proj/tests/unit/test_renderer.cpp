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

#include <algorithm>
#include <chrono>
#include <cmath>

#include "support/oracles.hpp"
#include "trihead/bench/scaling.hpp"
#include "trihead/core/error.hpp"
#include "trihead/core/rng.hpp"
#include "trihead/model.hpp"
#include "trihead/renderer/camera.hpp"
#include "trihead/renderer/composite.hpp"
#include "trihead/renderer/field.hpp"
#include "trihead/renderer/field_batch.hpp"
#include "trihead/renderer/render.hpp"
#include "trihead/renderer/sampling.hpp"
#include "trihead/trainer/toy_scene.hpp"

using namespace trihead;

namespace {

Camera frontal(int w, int h) { return Camera::orbit(0.0, 0.0, 2.6, 1.5, w, h); }

SampleBatch random_batch(Rng& rng, std::size_t p, double sigma_hi = 5.0) {
  SampleBatch b;
  for (std::size_t k = 0; k < p; ++k) {
    b.delta.push_back(rng.uniform(0.01, 0.2));
    b.sigma.push_back(rng.uniform(0.0, sigma_hi));
    b.color.emplace_back(rng.uniform(), rng.uniform(), rng.uniform());
  }
  return b;
}

Model small_model(std::uint64_t seed) {
  ModelConfig c;
  c.layout.resolutions = {8, 16, 32};
  c.d_a = 8;
  c.seed = seed;
  return Model::create(c);
}

std::vector<double> embedding(int d_a, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> e(static_cast<std::size_t>(d_a));
  for (double& v : e) v = rng.normal();
  return e;
}

}  // namespace

TEST_CASE("the principal ray points down -z") {
  Camera c;
  c.position = Vec3::Zero();
  c.width = c.height = 5;
  CHECK(pixel_direction(c, 2, 2) == Vec3(0, 0, -1));
}

TEST_CASE("one ray per pixel, row-major, unit length") {
  Camera c;
  c.width = c.height = 2;
  const std::vector<Ray> rays = generate_rays(c);
  REQUIRE(rays.size() == 4);
  CHECK(rays[1].row == 0);
  CHECK(rays[1].col == 1);
  CHECK(rays[2].row == 1);
  const Camera o = Camera::orbit(20.0, -10.0, 2.6, 1.5, 17, 9);
  for (const Ray& r : generate_rays(o)) CHECK(std::abs(r.direction.norm() - 1.0) < 1e-12);
}

TEST_CASE("corner ray follows the pinhole model") {
  Camera c;
  c.width = 8;
  c.height = 6;
  c.focal = 5.0;
  const Vec3 d = pixel_direction(c, 0, 0);
  const Vec3 expected = Vec3((0.5 - 4.0) / 5.0, -(0.5 - 3.0) / 5.0, -1.0).normalized();
  CHECK((d - expected).norm() < 1e-15);
}

TEST_CASE("orbit cameras are valid and project the origin to the image centre") {
  for (double az : {-30.0, 0.0, 25.0}) {
    for (double el : {-30.0, 0.0, 30.0}) {
      const Camera c = Camera::orbit(az, el, 2.6, 1.5, 64, 48);
      CHECK_NOTHROW(c.validate());
      const Vec2 p = c.project(Vec3::Zero());
      CHECK(std::abs(p.x() - 32.0) < 1e-9);
      CHECK(std::abs(p.y() - 24.0) < 1e-9);
    }
  }
  Camera bad;
  bad.orientation(0, 0) = 1.1;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("uniform sampling uses bin left edges") {
  const RaySamples s = sample_ray(1.0, 2.0, 5, SampleMode::uniform, {});
  const double expected[] = {1.0, 1.2, 1.4, 1.6, 1.8};
  for (int k = 0; k < 5; ++k) {
    CHECK(std::abs(s.depth[static_cast<std::size_t>(k)] - expected[k]) < 1e-15);
    CHECK(std::abs(s.delta[static_cast<std::size_t>(k)] - 0.2) < 1e-15);
  }
}

TEST_CASE("stratified sampling is sorted, in range, one per bin and reproducible") {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const SampleKey key{rng.next(), rng.below(100), rng.below(10000)};
    const RaySamples a = sample_ray(1.6, 3.6, 32, SampleMode::stratified, key);
    const RaySamples b = sample_ray(1.6, 3.6, 32, SampleMode::stratified, key);
    CHECK(a.depth == b.depth);
    for (std::size_t k = 0; k < 32; ++k) {
      const double lo = 1.6 + 2.0 * static_cast<double>(k) / 32, hi = 1.6 + 2.0 * static_cast<double>(k + 1) / 32;
      CHECK(a.depth[k] >= lo);
      CHECK(a.depth[k] < hi);
      CHECK(a.delta[k] > 0.0);
    }
    CHECK(std::abs(a.depth.back() + a.delta.back() - 3.6) < 1e-15);
  }
}

TEST_CASE("stratified draws are centred in their bin") {
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_ray(0.0, 1.0, 4, SampleMode::stratified, {3, 0, static_cast<std::uint64_t>(i)}).depth[0];
  const double mean = sum / n;
  const double se = 0.25 / std::sqrt(12.0) / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(mean - 0.125) < 3 * se);
}

TEST_CASE("fewer than two samples per ray is rejected") {
  CHECK_THROWS_AS(sample_ray(1.0, 2.0, 1, SampleMode::uniform, {}), Error);
}

TEST_CASE("zero network gives ln 2 and mid grey") {
  RadianceField f = RadianceField::create(24, 32, 16, 8, 8, 1);
  for (Mlp* m : {&f.trunk, &f.color}) {
    for (auto& l : m->layers()) {
      l.weight.setZero();
      l.bias.setZero();
    }
  }
  const FieldSample s = query_field(f, std::vector<double>(24, 0.3), Vec3(0, 0, -1), std::vector<double>(32, 0.2), 0.4);
  CHECK(std::abs(s.sigma - 0.6931471805599453) < 1e-15);
  CHECK(s.rgb == Vec3(0.5, 0.5, 0.5));
  CHECK(f.input_width() == 24 + 3 + 32 + 1);
}

TEST_CASE("query_field composes the trunk and colour head") {
  const RadianceField f = RadianceField::create(24, 8, 16, 6, 8, 4);
  Rng rng(2);
  for (int q = 0; q < 50; ++q) {
    std::vector<double> fx(24), ea(8);
    for (double& v : fx) v = rng.uniform(-1, 1);
    for (double& v : ea) v = rng.uniform(-1, 1);
    const double eb = rng.uniform();
    const Vec3 dir = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), -1).normalized();
    std::vector<double> in = fx;
    in.insert(in.end(), ea.begin(), ea.end());
    in.push_back(eb);
    const std::vector<double> t = oracle::mlp_forward(f.trunk, in);
    std::vector<double> cin(t.begin() + 1, t.end());
    cin.insert(cin.end(), {dir.x(), dir.y(), dir.z()});
    const std::vector<double> rgb = oracle::mlp_forward(f.color, cin);
    const FieldSample s = query_field(f, fx, dir, ea, eb);
    CHECK(std::abs(s.sigma - oracle::act(Activation::softplus, t[0])) < 1e-14);
    for (int c = 0; c < 3; ++c) CHECK(std::abs(s.rgb[c] - rgb[static_cast<std::size_t>(c)]) < 1e-14);
  }
}

TEST_CASE("density is nonnegative and colour in range on random probes") {
  const RadianceField f = RadianceField::create(24, 8, 16, 6, 8, 7);
  Rng rng(3);
  bool ok = true;
  std::vector<double> fx(24), ea(8);
  for (int q = 0; q < 100000; ++q) {
    for (double& v : fx) v = rng.uniform(-10, 10);
    for (double& v : ea) v = rng.uniform(-10, 10);
    const FieldSample s = query_field(f, fx, Vec3(0, 0, -1), ea, rng.uniform());
    ok = ok && s.sigma >= 0.0 && (s.rgb.array() >= 0.0).all() && (s.rgb.array() <= 1.0).all();
  }
  CHECK(ok);
}

TEST_CASE("compositing closed forms") {
  SUBCASE("empty space shows the background exactly") {
    SampleBatch b;
    b.delta.assign(16, 0.05);
    b.sigma.assign(16, 0.0);
    b.color.assign(16, Vec3(0.9, 0.1, 0.4));
    CHECK(composite_ray(b, Vec3(0.2, 0.3, 0.7)).color == Vec3(0.2, 0.3, 0.7));
  }
  SUBCASE("an opaque first sample saturates") {
    SampleBatch b;
    b.delta = {1.0, 1.0};
    b.sigma = {40.0, 3.0};
    b.color = {Vec3(1, 0, 0), Vec3(0, 1, 0)};
    CHECK((composite_ray(b, Vec3(0, 0, 1)).color - Vec3(1, 0, 0)).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("homogeneous medium follows Beer-Lambert") {
    const RaySamples s = sample_ray(0.0, 1.0, 256, SampleMode::uniform, {});
    SampleBatch b;
    b.delta = s.delta;
    b.sigma.assign(256, 2.0);
    const Vec3 c(0.3, 0.6, 0.9);
    b.color.assign(256, c);
    const Vec3 out = composite_ray(b, Vec3::Zero()).color;
    CHECK((out - c * (1.0 - std::exp(-2.0))).cwiseAbs().maxCoeff() < 1e-3);
  }
}

TEST_CASE("composite matches the product formula") {
  Rng rng(4);
  for (int q = 0; q < 200; ++q) {
    const SampleBatch b = random_batch(rng, 1 + rng.below(40));
    const Vec3 bg(rng.uniform(), rng.uniform(), rng.uniform());
    CHECK((composite_ray(b, bg).color - oracle::composite(b.sigma, b.delta, b.color, bg)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("weights and residual transmittance sum to one, transmittance is monotone") {
  Rng rng(5);
  double worst = 0.0;
  bool monotone = true, in_range = true;
  for (int q = 0; q < 10000; ++q) {
    const SampleBatch b = random_batch(rng, 2 + rng.below(64), 20.0);
    const CompositeResult r = composite_ray(b, Vec3(1, 1, 1), true);
    double s = r.residual_transmittance;
    for (double w : r.weights) s += w;
    worst = std::max(worst, std::abs(s - 1.0));
    for (std::size_t k = 1; k < r.transmittance.size(); ++k) monotone = monotone && r.transmittance[k] <= r.transmittance[k - 1];
    monotone = monotone && r.transmittance.back() >= 0.0;
    in_range = in_range && (r.color.array() >= 0.0).all() && (r.color.array() <= 1.0 + 1e-15).all();
  }
  CHECK(worst < 1e-12);
  CHECK(monotone);
  CHECK(in_range);
}

TEST_CASE("compositing gradients") {
  SUBCASE("one sample: dC/dc is alpha") {
    SampleBatch b;
    b.delta = {0.5};
    b.sigma = {1.3};
    b.color = {Vec3(0.2, 0.4, 0.6)};
    const CompositeGrad g = composite_backprop(b, Vec3::Zero(), Vec3(1, 1, 1));
    CHECK(std::abs(g.d_color[0].x() - (1.0 - std::exp(-0.65))) < 1e-15);
  }
  SUBCASE("at zero density dC/dsigma_k = delta_k (c_k - bg)") {
    Rng rng(7);
    SampleBatch b = random_batch(rng, 6);
    b.sigma.assign(6, 0.0);
    const Vec3 bg(0.1, 0.5, 0.9), up(1, 0, 0);
    const CompositeGrad g = composite_backprop(b, bg, up);
    for (std::size_t k = 0; k < 6; ++k) CHECK(std::abs(g.d_sigma[k] - b.delta[k] * (b.color[k].x() - bg.x())) < 1e-15);
  }
  SUBCASE("random batches match central differences") {
    Rng rng(8);
    double worst = 0.0;
    for (int q = 0; q < 50; ++q) {
      SampleBatch b = random_batch(rng, 12, 3.0);
      const Vec3 bg(rng.uniform(), rng.uniform(), rng.uniform());
      const Vec3 up(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
      const CompositeGrad g = composite_backprop(b, bg, up);
      auto f = [&] { return up.dot(composite_ray(b, bg).color); };
      for (std::size_t k = 0; k < b.size(); ++k) {
        worst = std::max(worst, oracle::rel_err(g.d_sigma[k], oracle::central_difference(b.sigma[k], 1e-6, f)));
        for (int c = 0; c < 3; ++c) {
          worst = std::max(worst, oracle::rel_err(g.d_color[k][c], oracle::central_difference(b.color[k][c], 1e-6, f)));
        }
      }
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("a zero-density field renders the background") {
  Model m = small_model(3);
  m.config.background = Vec3(0.25, 0.5, 0.75);
  m.field.trunk.layers().back().bias[0] = -1000.0;
  m.field.trunk.layers().back().weight.row(0).setZero();
  RenderOptions opt;
  opt.points = 8;
  const Frame f = render_frame(m, frontal(16, 12), embedding(8, 1), 0.0, opt);
  for (std::size_t p = 0; p < f.pixel_count(); ++p) {
    CHECK(f.rgb[3 * p] == doctest::Approx(0.25).epsilon(1e-7));
    CHECK(f.rgb[3 * p + 1] == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(f.rgb[3 * p + 2] == doctest::Approx(0.75).epsilon(1e-7));
  }
  const Frame r = render_frame_reference(m, frontal(16, 12), embedding(8, 1), 0.0, opt);
  for (std::size_t p = 0; p < r.pixel_count(); ++p) CHECK(r.rgb[3 * p] == 0.25);
}

TEST_CASE("an unrecorded field batch matches the recorded one and refuses backward") {
  const Model m = small_model(8);
  const FieldBatch<float> fb(m);
  Rng rng(4);
  FieldTape<float> tape;
  tape.points_per_ray = 5;
  tape.uvw.resize(3, 20);
  for (Eigen::Index i = 0; i < tape.uvw.size(); ++i) tape.uvw.data()[i] = static_cast<float>(rng.uniform());
  tape.e_a.resize(8, 4);
  for (Eigen::Index i = 0; i < tape.e_a.size(); ++i) tape.e_a.data()[i] = static_cast<float>(rng.normal());
  tape.blink = VectorX<float>::Constant(4, 0.6f);
  tape.dirs = MatrixX<float>::Constant(3, 4, 0.0f);
  tape.dirs.row(2).setConstant(-1.0f);
  fb.forward(tape);
  const MatrixX<float> sigma = tape.sigma, rgb = tape.rgb();
  tape.record = false;
  fb.forward(tape);
  CHECK(tape.sigma == sigma);
  CHECK(tape.rgb() == rgb);
  ModelGradient g = ModelGradient::zeros_like(m);
  CHECK_THROWS_AS(fb.backward(tape, MatrixX<float>::Ones(1, 20), MatrixX<float>::Ones(3, 20), g), Error);
}

TEST_CASE("parallel renderer agrees with the serial reference") {
  const Model m = small_model(4);
  RenderOptions opt;
  opt.points = 12;
  opt.seed = 9;
  opt.frame_index = 3;
  const std::vector<double> e = embedding(8, 2);
  const Frame a = render_frame(m, frontal(20, 16), e, 0.4, opt);
  const Frame b = render_frame_reference(m, frontal(20, 16), e, 0.4, opt);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rgb.size(); ++i) worst = std::max(worst, std::abs(a.rgb[i] - b.rgb[i]));
  CHECK(worst < (std::is_same_v<InferReal, float> ? 1e-4 : 1e-12));
  CHECK(a.stats.points == 12);
}

TEST_CASE("frames are bit-identical across runs and worker counts") {
  const Model m = small_model(5);
  RenderOptions opt;
  opt.points = 10;
  opt.seed = 77;
  const std::vector<double> e = embedding(8, 3);
  opt.threads = 1;
  const Frame a = render_frame(m, frontal(40, 30), e, 0.2, opt);
  const Frame a2 = render_frame(m, frontal(40, 30), e, 0.2, opt);
  opt.threads = 3;
  const Frame b = render_frame(m, frontal(40, 30), e, 0.2, opt);
  opt.threads = 8;
  const Frame c = render_frame(m, frontal(40, 30), e, 0.2, opt);
  CHECK(a.rgb == a2.rgb);
  CHECK(a.rgb == b.rgb);
  CHECK(a.rgb == c.rgb);
  opt.seed = 78;
  CHECK(render_frame(m, frontal(40, 30), e, 0.2, opt).rgb != a.rgb);
}

TEST_CASE("blink outside [0, 1] is clamped and reported in the stats") {
  const Model m = small_model(6);
  RenderOptions opt;
  opt.points = 4;
  const Frame f = render_frame(m, frontal(8, 8), embedding(8, 4), 1.5, opt);
  CHECK(f.stats.clamped_points > 0);
  const Frame g = render_frame(m, frontal(8, 8), embedding(8, 4), 1.0, opt);
  CHECK(f.rgb == g.rgb);
  CHECK(render_stats_csv_header() == "frame_index,wall_ms,clamped_points,P,H,W");
  const std::string row = render_stats_csv_row(g);
  CHECK(row.rfind("0,", 0) == 0);
  CHECK(row.substr(row.size() - 6) == ",4,8,8");
}

TEST_CASE("toy scene converges in the number of samples") {
  const ToyScene scene = ToyScene::smooth();
  const Camera cam = frontal(32, 32);
  const Frame lo = toy_ground_truth(scene, cam, 0.5, 0.3, 64).frame;
  const Frame hi = toy_ground_truth(scene, cam, 0.5, 0.3, 512).frame;
  double worst = 0.0;
  for (std::size_t i = 0; i < lo.rgb.size(); ++i) worst = std::max(worst, std::abs(lo.rgb[i] - hi.rgb[i]));
  CHECK(worst < 0.02);
}

TEST_CASE("render time is at most linear in the pixel count") {
  const Model m = small_model(7);
  RenderOptions opt;
  opt.points = 16;
  const std::vector<double> e = embedding(8, 5);
  const FrameRenderer r(m);
  const Camera narrow = frontal(64, 64), wide = frontal(128, 64);
  r.render(narrow, e, 0.0, opt);
  r.render(wide, e, 0.0, opt);
  auto ms = [&](const Camera& cam) {
    const auto t0 = std::chrono::steady_clock::now();
    r.render(cam, e, 0.0, opt);
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  };
  std::vector<double> single, twice;
  for (int i = 0; i < 21; ++i) {
    single.push_back(ms(narrow));
    twice.push_back(ms(wide));
  }
  // Fastest run of each; exponent 1.15 in the pixel count at most.
  const double ratio = *std::min_element(twice.begin(), twice.end()) / *std::min_element(single.begin(), single.end());
  CHECK(ratio <= std::pow(2.0, 1.15));
}
