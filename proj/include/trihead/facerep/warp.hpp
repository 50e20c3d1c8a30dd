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

#include <vector>

#include "trihead/core/types.hpp"
#include "trihead/frame.hpp"
#include "trihead/keypoints.hpp"

namespace trihead {

/// Dense displacement in pixels, row-major, (dx, dy) per pixel.
struct WarpField {
  int width = 0;
  int height = 0;
  std::vector<double> disp;

  static WarpField zero(int width, int height);
  Vec2 at(int row, int col) const {
    const std::size_t i = (static_cast<std::size_t>(row) * width + col) * 2;
    return {disp[i], disp[i + 1]};
  }
};

/// Pixel-centre coordinates of a normalized point: (u W - 0.5, v H - 0.5).
Vec2 to_pixel(const Vec2& uv, int width, int height);

double default_bandwidth(int width, int height);

/// Normalized Gaussian RBF interpolation of the keypoint displacements dst - src,
/// with kernels centred at the source keypoints.
WarpField build_warp(const KeypointSet& src, const KeypointSet& dst, int width, int height,
                     double bandwidth);

/// Backward warp: out(p) = in(p - field(p)), bilinear, clamped to the edge.
Frame apply_warp(const Frame& frame, const WarpField& field);

/// Bilinear lookup at pixel-centre coordinates with clamp-to-edge.
Vec3 sample_bilinear(const Frame& frame, double x, double y);

}  // namespace trihead
