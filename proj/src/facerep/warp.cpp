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

#include "trihead/facerep/warp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trihead/core/error.hpp"

namespace trihead {

WarpField WarpField::zero(int width, int height) {
  return {width, height, std::vector<double>(static_cast<std::size_t>(width) * height * 2, 0.0)};
}

Vec2 to_pixel(const Vec2& uv, int width, int height) {
  return {uv.x() * width - 0.5, uv.y() * height - 0.5};
}

double default_bandwidth(int width, int height) { return 0.08 * std::min(width, height); }

WarpField build_warp(const KeypointSet& src, const KeypointSet& dst, int width, int height,
                     double bandwidth) {
  require_size("warp landmark count", src.size(), dst.size());
  if (src.size() == 0) fail(ErrorCode::invalid_argument, "build_warp needs at least one keypoint");
  if (!(bandwidth > 0.0)) fail(ErrorCode::invalid_argument, "build_warp bandwidth must be positive");
  const std::size_t n = src.size();
  std::vector<Vec2> centre(n);
  std::vector<Vec2> offset(n);
  for (std::size_t i = 0; i < n; ++i) {
    centre[i] = to_pixel(src.points[i], width, height);
    offset[i] = to_pixel(dst.points[i], width, height) - centre[i];
  }
  const double inv_two_b2 = 1.0 / (2.0 * bandwidth * bandwidth);

  WarpField field = WarpField::zero(width, height);
#pragma omp parallel
  {
    std::vector<double> d2(n);
#pragma omp for schedule(static)
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
          d2[i] = (Vec2(c, r) - centre[i]).squaredNorm();
          nearest = std::min(nearest, d2[i]);
        }
        // Offsets are taken relative to the first one so that equal offsets reproduce
        // exactly, independent of how the weights round.
        double sum = 0.0;
        Vec2 acc = Vec2::Zero();
        for (std::size_t i = 0; i < n; ++i) {
          const double w = std::exp(-(d2[i] - nearest) * inv_two_b2);
          sum += w;
          acc += w * (offset[i] - offset[0]);
        }
        const Vec2 v = offset[0] + acc / sum;
        const std::size_t k = (static_cast<std::size_t>(r) * width + c) * 2;
        field.disp[k] = v.x();
        field.disp[k + 1] = v.y();
      }
    }
  }
  return field;
}

Vec3 sample_bilinear(const Frame& frame, double x, double y) {
  x = std::clamp(x, 0.0, static_cast<double>(frame.width - 1));
  y = std::clamp(y, 0.0, static_cast<double>(frame.height - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, frame.width - 1);
  const int y1 = std::min(y0 + 1, frame.height - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  Vec3 out;
  for (int ch = 0; ch < 3; ++ch) {
    out[ch] = frame.at(y0, x0, ch) * ((1.0 - fx) * (1.0 - fy)) + frame.at(y0, x1, ch) * (fx * (1.0 - fy)) +
              frame.at(y1, x0, ch) * ((1.0 - fx) * fy) + frame.at(y1, x1, ch) * (fx * fy);
  }
  return out;
}

Frame apply_warp(const Frame& frame, const WarpField& field) {
  if (field.width != frame.width || field.height != frame.height) {
    fail(ErrorCode::dimension_mismatch, "warp field size does not match frame");
  }
  Frame out(frame.width, frame.height);
  out.index = frame.index;
#pragma omp parallel for schedule(static)
  for (int r = 0; r < frame.height; ++r) {
    for (int c = 0; c < frame.width; ++c) {
      const Vec2 d = field.at(r, c);
      const Vec3 v = sample_bilinear(frame, c - d.x(), r - d.y());
      for (int ch = 0; ch < 3; ++ch) out.at(r, c, ch) = v[ch];
    }
  }
  return out;
}

}  // namespace trihead
