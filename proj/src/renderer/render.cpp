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

#include "trihead/renderer/render.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <vector>

#include "trihead/core/error.hpp"

namespace trihead {

FrameRenderer::FrameRenderer(const Model& model) : model_(&model), batch_(model) {}

Frame FrameRenderer::render(const Camera& camera, std::span<const double> e_a, double blink,
                            const RenderOptions& options) const {
  const auto start = std::chrono::steady_clock::now();
  camera.validate();
  if (options.points < 2) fail(ErrorCode::invalid_argument, "render needs P >= 2");
  const Model& model = *model_;
  require_size("render e_A", model.config.d_a, e_a.size());

  const std::vector<double> e_norm = model.normalizer.apply(e_a);
  std::uint64_t clamped = 0;
  if (!(blink >= 0.0 && blink <= 1.0)) {
    blink = std::isnan(blink) ? 0.0 : std::clamp(blink, 0.0, 1.0);
    ++clamped;
  }

  using T = InferReal;
  const int width = camera.width;
  const int height = camera.height;
  const int P = options.points;
  const long pixels = static_cast<long>(width) * height;
  const long tiles = (pixels + kRenderTileRays - 1) / kRenderTileRays;
  const Vec3 bg = model.config.background;
  const BoundingBox& box = model.grid.box;
  Frame frame(width, height);
  frame.index = options.frame_index;

  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel num_threads(threads) reduction(+ : clamped)
  {
    FieldTape<T> tape;
    tape.record = false;
    std::vector<double> depth(P), delta(static_cast<std::size_t>(kRenderTileRays) * P);
#pragma omp for schedule(dynamic, 1)
    for (long tile = 0; tile < tiles; ++tile) {
      const long first = tile * kRenderTileRays;
      const int rays = static_cast<int>(std::min<long>(kRenderTileRays, pixels - first));
      tape.points_per_ray = P;
      tape.uvw.resize(3, static_cast<Eigen::Index>(rays) * P);
      tape.e_a.resize(model.config.d_a, rays);
      tape.blink.setConstant(rays, static_cast<T>(blink));
      tape.dirs.resize(3, rays);
      for (int r = 0; r < rays; ++r) {
        const long pixel = first + r;
        const int row = static_cast<int>(pixel / width);
        const int col = static_cast<int>(pixel % width);
        const Vec3 dir = pixel_direction(camera, row, col);
        for (int d = 0; d < model.config.d_a; ++d) tape.e_a(d, r) = static_cast<T>(e_norm[d]);
        tape.dirs.col(r) = dir.cast<T>();
        std::span<double> dl(delta.data() + static_cast<std::size_t>(r) * P, P);
        sample_depths(camera.near, camera.far, options.mode,
                      {options.seed, static_cast<std::uint64_t>(options.frame_index),
                       static_cast<std::uint64_t>(pixel)},
                      depth, dl);
        for (int k = 0; k < P; ++k) {
          bool was_clamped = false;
          const Vec3 uvw = box.normalize(camera.position + depth[k] * dir, &was_clamped);
          clamped += was_clamped ? 1 : 0;
          tape.uvw.col(static_cast<Eigen::Index>(r) * P + k) = uvw.cast<T>();
        }
      }
      batch_.forward(tape);
      const MatrixX<T>& rgb = tape.rgb();
      for (int r = 0; r < rays; ++r) {
        double t = 1.0;
        Vec3 c = Vec3::Zero();
        for (int k = 0; k < P; ++k) {
          const Eigen::Index col = static_cast<Eigen::Index>(r) * P + k;
          const double keep = std::exp(-static_cast<double>(tape.sigma(0, col)) * delta[col]);
          const double w = t * (1.0 - keep);
          c += w * rgb.col(col).template cast<double>();
          t *= keep;
        }
        c += t * bg;
        double* px = frame.rgb.data() + (first + r) * 3;
        for (int ch = 0; ch < 3; ++ch) px[ch] = std::clamp(c[ch], 0.0, 1.0);
      }
    }
  }

  frame.stats.clamped_points = clamped;
  frame.stats.points = P;
  frame.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return frame;
}

Frame render_frame(const Model& model, const Camera& camera, std::span<const double> e_a,
                   double blink, const RenderOptions& options) {
  return FrameRenderer(model).render(camera, e_a, blink, options);
}

std::string render_stats_csv_header() { return "frame_index,wall_ms,clamped_points,P,H,W"; }

std::string render_stats_csv_row(const Frame& frame) {
  std::ostringstream os;
  os << frame.index << ',' << frame.stats.wall_ms << ',' << frame.stats.clamped_points << ','
     << frame.stats.points << ',' << frame.height << ',' << frame.width;
  return os.str();
}

}  // namespace trihead
