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

#include "trihead/trainer/metrics.hpp"

#include <cmath>

#include "trihead/core/error.hpp"

namespace trihead {

double psnr_from_mse(double mse) { return mse == 0.0 ? kPsnrIdentical : 10.0 * std::log10(1.0 / mse); }

double metric_psnr(const Frame& a, const Frame& b) {
  require_same_size(a, b, "psnr");
  if (a.rgb.empty()) fail(ErrorCode::invalid_argument, "psnr of empty frames");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rgb.size(); ++i) {
    const double d = a.rgb[i] - b.rgb[i];
    sum += d * d;
  }
  return psnr_from_mse(sum / static_cast<double>(a.rgb.size()));
}

double metric_lmd(const KeypointSet& pred, const KeypointSet& gt, int width, int height) {
  require_size("lmd landmark count", gt.size(), pred.size());
  if (gt.size() == 0) fail(ErrorCode::invalid_argument, "lmd of empty keypoint sets");
  double sum = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const Vec2 d = (pred.points[i] - gt.points[i]).cwiseProduct(Vec2(width, height));
    sum += d.norm();
  }
  return sum / static_cast<double>(gt.size());
}

PhotometricLoss photometric_loss(std::span<const double> pred, std::span<const double> target) {
  require_size("photometric loss", target.size(), pred.size());
  if (pred.empty()) fail(ErrorCode::invalid_argument, "photometric loss of an empty batch");
  PhotometricLoss out;
  out.grad.resize(pred.size());
  const double n = static_cast<double>(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    out.loss += d * d;
    out.grad[i] = 2.0 * d / n;
  }
  out.loss /= n;
  return out;
}

}  // namespace trihead
