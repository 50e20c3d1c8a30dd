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
#include <functional>
#include <optional>
#include <vector>

#include "trihead/conditioning/audio.hpp"
#include "trihead/facerep/synthesize.hpp"
#include "trihead/frame.hpp"
#include "trihead/keypoints.hpp"
#include "trihead/model.hpp"
#include "trihead/renderer/camera.hpp"
#include "trihead/renderer/sampling.hpp"
#include "trihead/trainer/toy_scene.hpp"

namespace trihead {

/// Either raw audio (featurized once per run) or precomputed embeddings.
struct AudioSource {
  std::optional<AudioTrack> track;
  std::optional<AudioEmbeddingSequence> features;
};

/// Supplies per-frame source keypoints for frames rendered from the toy scene.
struct ToyKeypointSource {
  ToyScene scene;
  ApertureMap aperture;
  int landmarks = 68;
};

struct PipelineConfig {
  int width = 128;
  int height = 128;
  int points = 32;
  double fps = 25.0;
  /// 0 renders one frame per embedding; more than that repeats the last embedding.
  int frames = 0;
  std::uint64_t seed = 7;
  SampleMode mode = SampleMode::stratified;
  int threads = 0;
  double camera_distance = 2.6;
  double focal_factor = 1.5;
  /// Per-frame camera; defaults to the frontal orbit camera.
  std::function<Camera(int)> camera_track;
  /// Per-frame blink; falls back to the features' blink values, then 0.
  std::vector<double> blink;
  ReplacementOptions replacement;
  bool keep_frames = true;

  Camera camera_for(int frame) const;
};

struct PipelineInputs {
  AudioSource audio;
  Frame reference;
  std::optional<KeypointSet> reference_keypoints;  // else reference.landmarks
  std::optional<KeypointSet> source_keypoints;     // fixed for every frame
  std::optional<ToyKeypointSource> toy;            // per-frame analytic keypoints
};

struct PipelineResult {
  std::vector<Frame> frames;
  std::size_t frame_count = 0;
  double audio_ms = 0.0;
  std::vector<double> render_ms;
  std::vector<double> replace_ms;
  double total_ms = 0.0;
  std::uint64_t audio_invocations = 0;  // featurize_audio calls during this run
};

/// Audio once, then render and face replacement per frame.
PipelineResult run_pipeline(const Model& model, const PipelineInputs& inputs, const PipelineConfig& config);

/// Frontal toy reference at a = 0, B = 0 with its landmarks attached.
Frame toy_reference(const ToyScene& scene, int width, int height, int landmarks, double camera_distance = 2.6,
                    double focal_factor = 1.5);

}  // namespace trihead
