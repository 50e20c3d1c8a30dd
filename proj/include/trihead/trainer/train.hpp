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
#include <string>
#include <vector>

#include "trihead/core/rng.hpp"
#include "trihead/core/types.hpp"
#include "trihead/model.hpp"
#include "trihead/renderer/sampling.hpp"
#include "trihead/trainer/dataset.hpp"

namespace trihead {

/// A set of rays with their conditioning and target colors.
struct RayBatch {
  int points = 32;
  SampleMode mode = SampleMode::stratified;
  std::uint64_t seed = 0;
  std::uint64_t step = 0;  // keys the stratified jitter together with the ray slot
  std::vector<Vec3> origin;
  std::vector<Vec3> direction;
  std::vector<double> near;
  std::vector<double> far;
  Eigen::MatrixXd e_a;     // d_a x rays, already normalized
  Eigen::VectorXd blink;   // per ray
  Eigen::MatrixXd target;  // 3 x rays

  std::size_t rays() const { return origin.size(); }
};

/// Mean squared error of the rendered batch against its targets. When `grad` is given
/// the gradient of that loss is accumulated into it.
double batch_loss(const Model& model, const RayBatch& batch, ModelGradient* grad = nullptr,
                  Eigen::MatrixXd* pred = nullptr);

/// Random rays drawn uniformly over views and pixels.
RayBatch sample_batch(const Model& model, const TrainConfig& config, const std::vector<TrainView>& views,
                      const AudioEmbeddingSequence& embeddings, std::uint64_t step, Rng& rng);

struct LossLogRow {
  int iteration = 0;
  double loss = 0.0;
  double psnr_probe = 0.0;  // PSNR of the batch loss
};

struct TrainResult {
  Model model;
  std::vector<LossLogRow> log;
  double seconds = 0.0;
};

/// Adam on two parameter groups (tables, networks). Throws divergence when the loss
/// stays above divergence_factor times the first loss for divergence_patience
/// consecutive iterations.
TrainResult train(const TrainConfig& config, const Dataset& data,
                  const std::function<void(const LossLogRow&)>& on_log = {});

/// iteration,loss,psnr_probe
void write_loss_log(const std::string& path, const std::vector<LossLogRow>& rows);

struct ViewScore {
  double psnr = 0.0;
  double lmd = 0.0;
  double fitted_aperture = 0.0;
  double fitted_blink = 0.0;
};

struct EvalReport {
  std::vector<ViewScore> views;
  double mean_psnr = 0.0;
  double mean_lmd = 0.0;
};

/// Renders every held-out view with the model, scores PSNR against the ground truth,
/// and LMD of keypoints detected on the render against the analytic keypoints.
EvalReport evaluate(const Model& model, const TrainConfig& config, const Dataset& data, const ToyScene& scene);

}  // namespace trihead
