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

struct Similarity {
  double scale = 1.0;
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& x) const { return scale * (rotation * x) + translation; }
};

/// Least-squares similarity with dst ~ s R src + t (Umeyama). Throws
/// degenerate_landmarks when the centred source points have rank < 2.
Similarity align_similarity(const std::vector<Vec3>& src, const std::vector<Vec3>& dst);

struct MotionParams {
  double scale = 1.0;
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  std::vector<Vec3> delta;      // expression offsets, L entries
  std::vector<Vec3> canonical;  // x_c, L entries

  std::size_t landmark_count() const { return canonical.size(); }
  /// Throws unless the rotation is orthonormal within 1e-9, scale > 0 and sizes agree.
  void validate() const;
};

/// Keypoints as 3D points (u * aspect, v, 0), aspect = width / height.
std::vector<Vec3> lift_keypoints(const KeypointSet& kp, double aspect);

/// Aligns the source keypoints onto the reference keypoints. Keypoints come from the
/// arguments when given, otherwise from the frames' attached landmarks.
MotionParams extract_motion(const Frame& motion_frame, const Frame& reference,
                            const KeypointSet* kp_source = nullptr,
                            const KeypointSet* kp_reference = nullptr);

/// Drops the global pose so the expression is expressed in the reference frame.
MotionParams retarget(const MotionParams& motion);

/// x_p = project(s R (x_c + delta) + t), orthographic, u divided by aspect, clamped to [0,1].
KeypointSet transform_keypoints(const MotionParams& motion, double aspect = 1.0,
                                ClampCounter* clamps = nullptr);

struct FaceRegionMask {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // row-major, in [0,1]

  static FaceRegionMask constant(int width, int height, double value);
  double at(int row, int col) const { return values[static_cast<std::size_t>(row) * width + col]; }
  /// Value at the pixel containing the normalized point.
  double sample(const Vec2& uv) const;
};

/// Super-ellipse |x|^e + |y|^e = 1 fitted to the keypoint bounding box. The mask is 1
/// inside and falls to 0 by smoothstep over a band `falloff` box-widths wide outside it.
FaceRegionMask fit_face_mask(const KeypointSet& kp, int width, int height, double falloff = 0.1,
                             double exponent = 4.0);

/// out = m x_p + (1 - m) x_ref per keypoint, m sampled at the reference location.
KeypointSet stitch_keypoints(const KeypointSet& x_p, const KeypointSet& x_ref,
                             const FaceRegionMask& mask);

}  // namespace trihead
