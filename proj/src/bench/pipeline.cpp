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

#include "trihead/bench/pipeline.hpp"

#include <algorithm>
#include <chrono>

#include "trihead/core/error.hpp"
#include "trihead/renderer/render.hpp"

namespace trihead {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) { return std::chrono::duration<double, std::milli>(Clock::now() - t).count(); }

}  // namespace

Camera PipelineConfig::camera_for(int frame) const {
  if (camera_track) return camera_track(frame);
  return Camera::orbit(0.0, 0.0, camera_distance, focal_factor, width, height);
}

Frame toy_reference(const ToyScene& scene, int width, int height, int landmarks, double camera_distance,
                    double focal_factor) {
  const Camera cam = Camera::orbit(0.0, 0.0, camera_distance, focal_factor, width, height);
  return toy_ground_truth(scene, cam, 0.0, 0.0, 128, landmarks).frame;
}

PipelineResult run_pipeline(const Model& model, const PipelineInputs& inputs, const PipelineConfig& config) {
  if (!inputs.audio.track && !inputs.audio.features) fail(ErrorCode::invalid_argument, "pipeline needs audio or features");
  if (inputs.reference.width != config.width || inputs.reference.height != config.height) {
    fail(ErrorCode::dimension_mismatch, "reference image is " + std::to_string(inputs.reference.width) + "x" +
                                            std::to_string(inputs.reference.height) + ", output is " +
                                            std::to_string(config.width) + "x" + std::to_string(config.height));
  }
  const KeypointSet* kp_ref = inputs.reference_keypoints ? &*inputs.reference_keypoints
                              : inputs.reference.landmarks ? &*inputs.reference.landmarks
                                                           : nullptr;
  if (kp_ref == nullptr) fail(ErrorCode::keypoints_required, "reference image has no keypoints");
  if (!inputs.source_keypoints && !inputs.toy) {
    fail(ErrorCode::keypoints_required, "frames need source keypoints from a file or the toy scene");
  }

  PipelineResult out;
  const auto run_start = Clock::now();
  const std::uint64_t calls_before = featurize_audio_invocations();

  // Audio stage, once for the whole track.
  auto t = Clock::now();
  AudioEmbeddingSequence emb = inputs.audio.features ? *inputs.audio.features
                                                     : featurize_audio(*inputs.audio.track, config.fps, model.d_a());
  out.audio_ms = ms_since(t);
  require_size("d_a", model.d_a(), emb.d_a);
  if (emb.frames() == 0) fail(ErrorCode::empty_audio, "no embedding frames");

  const std::size_t n = config.frames > 0 ? static_cast<std::size_t>(config.frames) : emb.frames();
  out.frame_count = n;
  const FrameRenderer renderer(model);
  for (std::size_t i = 0; i < n; ++i) {
    try {
      const std::size_t row = std::min(i, emb.frames() - 1);
      double blink = 0.0;
      if (i < config.blink.size()) {
        blink = config.blink[i];
      } else if (emb.blink && row < emb.blink->size()) {
        blink = (*emb.blink)[row];
      }
      const Camera cam = config.camera_for(static_cast<int>(i));
      RenderOptions opt;
      opt.points = config.points;
      opt.mode = config.mode;
      opt.seed = config.seed;
      opt.frame_index = static_cast<int>(i);
      opt.threads = config.threads;

      t = Clock::now();
      Frame o = renderer.render(cam, emb.row(row), blink, opt);
      out.render_ms.push_back(ms_since(t));

      t = Clock::now();
      if (inputs.source_keypoints) {
        o.landmarks = *inputs.source_keypoints;
      } else {
        const ToyKeypointSource& toy = *inputs.toy;
        const double a = toy.aperture(emb.row(row));
        o.landmarks = project_keypoints(cam, toy.scene.keypoints(a, std::clamp(blink, 0.0, 1.0), toy.landmarks));
      }
      ReplacementResult r = replace_face(o, inputs.reference, model.decoder, config.replacement, nullptr, kp_ref);
      out.replace_ms.push_back(ms_since(t));
      r.frame.index = static_cast<int>(i);
      r.frame.stats = o.stats;
      if (config.keep_frames) out.frames.push_back(std::move(r.frame));
    } catch (const Error& e) {
      fail(e.code(), std::string(e.what()) + " (frame " + std::to_string(i) + ")");
    }
  }
  out.total_ms = ms_since(run_start);
  out.audio_invocations = featurize_audio_invocations() - calls_before;
  return out;
}

}  // namespace trihead
