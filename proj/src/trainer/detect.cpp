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

#include "trihead/trainer/detect.hpp"

#include <algorithm>
#include <limits>

#include "trihead/core/error.hpp"

namespace trihead {

KeypointFit detect_keypoints(const Frame& frame, const ToyScene& scene, const Camera& camera, int landmarks,
                             const Vec3& background, int points) {
  if (frame.width != camera.width || frame.height != camera.height) {
    fail(ErrorCode::dimension_mismatch, "detector frame does not match camera");
  }
  auto mse = [&](double a, double b) {
    const Frame r = toy_ground_truth(scene, camera, a, b, points, landmarks, background).frame;
    double s = 0.0;
    for (std::size_t i = 0; i < r.rgb.size(); ++i) s += (r.rgb[i] - frame.rgb[i]) * (r.rgb[i] - frame.rgb[i]);
    return s / static_cast<double>(r.rgb.size());
  };
  KeypointFit best;
  best.mse = std::numeric_limits<double>::infinity();
  auto search = [&](double a_lo, double a_hi, double b_lo, double b_hi, bool vary_a) {
    for (int i = 0; i <= 10; ++i) {
      const double t = std::clamp((vary_a ? a_lo : b_lo) + i * ((vary_a ? a_hi - a_lo : b_hi - b_lo) / 10.0), 0.0, 1.0);
      const double a = vary_a ? t : best.aperture;
      const double b = vary_a ? best.blink : t;
      const double e = mse(a, b);
      if (e < best.mse) {
        best.mse = e;
        best.aperture = a;
        best.blink = b;
      }
    }
  };
  // Mouth and eyes occupy disjoint regions, so alternating 1-D searches converge quickly.
  search(0.0, 1.0, 0.0, 0.0, true);
  search(0.0, 0.0, 0.0, 1.0, false);
  for (double span : {0.1, 0.02}) {
    search(best.aperture - span, best.aperture + span, 0.0, 0.0, true);
    search(0.0, 0.0, best.blink - span, best.blink + span, false);
  }
  best.keypoints = project_keypoints(camera, scene.keypoints(best.aperture, best.blink, landmarks));
  return best;
}

}  // namespace trihead
