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

#include "trihead/trainer/dataset.hpp"

#include "trihead/core/error.hpp"
#include "trihead/core/rng.hpp"

namespace trihead {

void TrainConfig::validate() const {
  if (width <= 0 || height <= 0) fail(ErrorCode::invalid_argument, "train image size must be positive");
  if (points < 2 || gt_points < 2) fail(ErrorCode::invalid_argument, "train needs P >= 2");
  if (iterations < 0 || rays_per_batch <= 0) fail(ErrorCode::invalid_argument, "train iterations and batch size");
  if (!(lr_tables > 0.0) || !(lr_networks > 0.0) || !(lr_final_fraction > 0.0)) {
    fail(ErrorCode::invalid_argument, "learning rates must be positive");
  }
  if (!(fps > 0.0) || !(audio_seconds > 0.0)) fail(ErrorCode::invalid_argument, "train audio settings");
  if (train_views <= 0 || heldout_views < 0) fail(ErrorCode::invalid_argument, "train view counts");
  if (log_every <= 0 || divergence_patience <= 0 || !(divergence_factor > 1.0)) {
    fail(ErrorCode::invalid_argument, "train logging and divergence settings");
  }
  model.validate();
}

namespace {

TrainView make_view(const TrainConfig& config, const ToyScene& scene, const Dataset& data, Rng& rng) {
  TrainView v;
  const double az = rng.uniform(-config.orbit_degrees, config.orbit_degrees);
  const double el = rng.uniform(-config.orbit_degrees, config.orbit_degrees);
  v.camera = Camera::orbit(az, el, config.camera_distance, config.focal_factor, config.width, config.height);
  v.frame = rng.below(data.embeddings.frames());
  v.aperture = data.apertures[v.frame];
  v.blink = rng.uniform() < 0.5 ? 0.0 : rng.uniform();
  GroundTruth gt = toy_ground_truth(scene, v.camera, v.aperture, v.blink, config.gt_points,
                                    config.model.landmarks, config.model.background);
  v.target = std::move(gt.frame);
  v.keypoints = std::move(gt.keypoints);
  return v;
}

}  // namespace

Dataset build_dataset(const TrainConfig& config, const ToyScene& scene) {
  config.validate();
  Dataset data;
  data.audio = make_toy_audio(config.audio_seconds, config.sample_rate, config.seed);
  data.embeddings = featurize_audio(data.audio.track, config.fps, config.model.d_a);
  data.aperture_map = ApertureMap::calibrate(config.sample_rate, config.fps, config.model.d_a);
  for (std::size_t t = 0; t < data.embeddings.frames(); ++t) {
    data.apertures.push_back(data.aperture_map(data.embeddings.row(t)));
  }
  Rng train_rng(mix64(config.seed ^ 0x7261696eull));
  for (int k = 0; k < config.train_views; ++k) data.train.push_back(make_view(config, scene, data, train_rng));
  Rng heldout_rng(mix64(config.seed ^ 0x686f6c64ull));
  for (int k = 0; k < config.heldout_views; ++k) data.heldout.push_back(make_view(config, scene, data, heldout_rng));
  return data;
}

}  // namespace trihead
