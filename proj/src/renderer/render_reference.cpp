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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

#include "trihead/conditioning/gates.hpp"
#include "trihead/core/error.hpp"
#include "trihead/renderer/composite.hpp"
#include "trihead/renderer/field.hpp"
#include "trihead/renderer/render.hpp"
#include "trihead/triplane.hpp"

namespace trihead {

Frame render_frame_reference(const Model& model, const Camera& camera, std::span<const double> e_a,
                             double blink, const RenderOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  camera.validate();
  if (options.points < 2) fail(ErrorCode::invalid_argument, "render needs P >= 2");
  require_size("render e_A", model.config.d_a, e_a.size());
  const std::vector<double> e_norm = model.normalizer.apply(e_a);

  ClampCounter clamps;
  if (!(blink >= 0.0 && blink <= 1.0)) {
    blink = std::isnan(blink) ? 0.0 : std::clamp(blink, 0.0, 1.0);
    clamps.bump();
  }
  Frame frame(camera.width, camera.height);
  frame.index = options.frame_index;
  std::vector<double> f_x(static_cast<std::size_t>(model.grid.output_dim()));
  SampleBatch batch;
  batch.sigma.resize(options.points);
  batch.color.resize(options.points);

  for (const Ray& ray : generate_rays(camera)) {
    const std::uint64_t pixel = static_cast<std::uint64_t>(ray.row) * camera.width + ray.col;
    try {
      const RaySamples s = sample_ray(camera.near, camera.far, options.points, options.mode,
                                      {options.seed, static_cast<std::uint64_t>(options.frame_index), pixel});
      batch.delta = s.delta;
      for (int k = 0; k < options.points; ++k) {
        triplane_encode(model.grid, ray.origin + s.depth[k] * ray.direction, f_x, &clamps);
        const AudioGate ga = condition_audio(model.gates, f_x, e_norm);
        const BlinkGate gb = condition_blink(model.gates, f_x, blink);
        const FieldSample fs = query_field(model.field, f_x, ray.direction, ga.gated, gb.value);
        batch.sigma[k] = fs.sigma;
        batch.color[k] = fs.rgb;
      }
      const CompositeResult cr = composite_ray(batch, model.config.background);
      for (int ch = 0; ch < 3; ++ch) frame.at(ray.row, ray.col, ch) = std::clamp(cr.color[ch], 0.0, 1.0);
    } catch (const Error& e) {
      fail(e.code(), std::string(e.what()) + " at pixel (" + std::to_string(ray.row) + ", " +
                         std::to_string(ray.col) + ")");
    }
  }
  frame.stats.clamped_points = clamps.count;
  frame.stats.points = options.points;
  frame.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return frame;
}

}  // namespace trihead
