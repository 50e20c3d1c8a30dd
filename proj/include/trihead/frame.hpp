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
#include <optional>
#include <vector>

#include "trihead/core/error.hpp"
#include "trihead/core/types.hpp"
#include "trihead/keypoints.hpp"

namespace trihead {

struct RenderStats {
  std::uint64_t clamped_points = 0;
  double wall_ms = 0.0;
  int points = 0;
};

/// H x W x 3 image with values in [0, 1], row-major, channels interleaved.
struct Frame {
  int width = 0;
  int height = 0;
  int index = 0;
  std::vector<double> rgb;
  RenderStats stats;
  /// Ground-truth landmarks attached by the toy pipeline.
  std::optional<KeypointSet> landmarks;

  Frame() = default;
  Frame(int w, int h, double fill = 0.0)
      : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, fill) {}

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  double& at(int row, int col, int ch) { return rgb[(static_cast<std::size_t>(row) * width + col) * 3 + ch]; }
  double at(int row, int col, int ch) const { return rgb[(static_cast<std::size_t>(row) * width + col) * 3 + ch]; }
  bool same_size(const Frame& o) const { return width == o.width && height == o.height; }
};

inline void require_same_size(const Frame& a, const Frame& b, const char* what) {
  if (!a.same_size(b)) {
    fail(ErrorCode::dimension_mismatch, std::string(what) + ": " + std::to_string(a.width) + "x" +
                                            std::to_string(a.height) + " vs " + std::to_string(b.width) +
                                            "x" + std::to_string(b.height));
  }
}

}  // namespace trihead
