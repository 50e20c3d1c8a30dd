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

#include "trihead/core/types.hpp"
#include "trihead/frame.hpp"
#include "trihead/keypoints.hpp"
#include "trihead/renderer/camera.hpp"
#include "trihead/trainer/toy_scene.hpp"

namespace trihead {

struct KeypointFit {
  double aperture = 0.0;
  double blink = 0.0;
  double mse = 0.0;
  KeypointSet keypoints;
};

/// Landmark detector for frames of the toy scene seen from a known camera: fits the
/// mouth aperture and blink by comparing the frame against analytic renders, then
/// returns the scene's keypoints for the best fit.
KeypointFit detect_keypoints(const Frame& frame, const ToyScene& scene, const Camera& camera,
                             int landmarks = 68, const Vec3& background = Vec3::Zero(), int points = 64);

}  // namespace trihead
