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

#include <limits>
#include <span>
#include <vector>

#include "trihead/frame.hpp"
#include "trihead/keypoints.hpp"

namespace trihead {

/// Returned by metric_psnr for identical frames.
inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

/// 10 log10(1 / MSE) over all channels of unit-range frames.
double metric_psnr(const Frame& a, const Frame& b);
double psnr_from_mse(double mse);

/// Mean Euclidean landmark distance in pixels at width x height.
double metric_lmd(const KeypointSet& pred, const KeypointSet& gt, int width, int height);

struct PhotometricLoss {
  double loss = 0.0;
  std::vector<double> grad;  // 2 (pred - target) / count
};

/// Mean squared error over all entries.
PhotometricLoss photometric_loss(std::span<const double> pred, std::span<const double> target);

}  // namespace trihead
