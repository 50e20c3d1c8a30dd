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
#include <vector>

#include "trihead/conditioning/audio.hpp"
#include "trihead/frame.hpp"
#include "trihead/model.hpp"
#include "trihead/renderer/camera.hpp"
#include "trihead/trainer/toy_scene.hpp"

namespace trihead {

struct TrainConfig {
  int width = 64;
  int height = 64;
  int points = 32;
  int iterations = 20000;
  int rays_per_batch = 256;
  double lr_tables = 1e-2;
  double lr_networks = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.99;
  /// Both learning rates decay exponentially to this fraction at the last iteration.
  double lr_final_fraction = 1.0;
  std::uint64_t seed = 7;
  double fps = 25.0;
  int sample_rate = 16000;
  double audio_seconds = 8.0;
  int train_views = 160;
  int heldout_views = 8;
  int gt_points = 256;
  double orbit_degrees = 30.0;
  double camera_distance = 2.6;
  double focal_factor = 1.5;  // focal length in units of image height
  int log_every = 100;
  double divergence_factor = 10.0;
  int divergence_patience = 500;
  ModelConfig model;

  void validate() const;
};

struct TrainView {
  Camera camera;
  std::size_t frame = 0;  // index into the embedding sequence
  double aperture = 0.0;
  double blink = 0.0;
  Frame target;
  KeypointSet keypoints;
};

struct Dataset {
  ToyAudio audio;
  AudioEmbeddingSequence embeddings;
  ApertureMap aperture_map;
  std::vector<double> apertures;  // per embedding frame
  std::vector<TrainView> train;
  std::vector<TrainView> heldout;
};

/// Toy audio, its embeddings, and ground-truth views at random orbit poses, frames and
/// blink values. Deterministic in config.seed.
Dataset build_dataset(const TrainConfig& config, const ToyScene& scene);

}  // namespace trihead
