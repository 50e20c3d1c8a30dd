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
#include <memory>
#include <span>
#include <string>

#include "trihead/core/types.hpp"
#include "trihead/frame.hpp"
#include "trihead/model.hpp"
#include "trihead/renderer/camera.hpp"
#include "trihead/renderer/field_batch.hpp"
#include "trihead/renderer/sampling.hpp"

namespace trihead {

struct RenderOptions {
  int points = 64;
  SampleMode mode = SampleMode::stratified;
  std::uint64_t seed = 0;
  int frame_index = 0;
  /// Worker count for the parallel path; 0 keeps the OpenMP default.
  int threads = 0;
};

/// Rays per work item. Fixed so the partition, and therefore every floating-point
/// operation, is the same for any worker count.
inline constexpr int kRenderTileRays = 64;

/// Parallel renderer over a snapshot of a model, evaluated in InferReal precision.
class FrameRenderer {
 public:
  explicit FrameRenderer(const Model& model);

  /// `e_a` is the raw audio embedding of this frame; it is standardized with the model's
  /// normalizer. `blink` outside [0,1] is clamped and counted in the stats.
  Frame render(const Camera& camera, std::span<const double> e_a, double blink,
               const RenderOptions& options) const;

  const Model& model() const { return *model_; }

 private:
  const Model* model_;
  FieldBatch<InferReal> batch_;
};

Frame render_frame(const Model& model, const Camera& camera, std::span<const double> e_a,
                   double blink, const RenderOptions& options);

/// Serial per-point evaluation in double through the scalar module operations.
/// Used as the oracle for the parallel path.
Frame render_frame_reference(const Model& model, const Camera& camera, std::span<const double> e_a,
                             double blink, const RenderOptions& options);

/// frame_index,wall_ms,clamped_points,P,H,W
std::string render_stats_csv_header();
std::string render_stats_csv_row(const Frame& frame);

}  // namespace trihead
