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
#include <vector>

#include "trihead/core/mlp.hpp"
#include "trihead/facerep/motion.hpp"
#include "trihead/facerep/warp.hpp"
#include "trihead/frame.hpp"

namespace trihead {

/// Width of the decoder input: a 3x3 RGB neighbourhood.
inline constexpr int kDecoderInputs = 27;

/// [27, hidden, hidden, 3] relu network whose last layer is zero, so its residual is 0.
Mlp make_identity_decoder(int hidden, std::uint64_t seed);

/// out = clamp(in + decoder(3x3 neighbourhood of in), 0, 1), edges clamped.
Frame apply_decoder(const Mlp& decoder, const Frame& in);

/// warped = apply_warp(O, build_warp(kp_motion_src, x_p)); composited = m warped + (1 - m) I_r;
/// result = apply_decoder(decoder, composited).
Frame synthesize(const Frame& motion_frame, const Frame& reference, const KeypointSet& x_p,
                 const KeypointSet& kp_motion_src, const Mlp& decoder, const FaceRegionMask& mask,
                 double bandwidth);

struct ReplacementOptions {
  double bandwidth_factor = 0.08;  // times min(H, W)
  double mask_falloff = 0.1;
  double mask_exponent = 4.0;
};

struct ReplacementResult {
  Frame frame;
  KeypointSet keypoints;  // stitched keypoints driving the warp
  MotionParams motion;
};

/// Motion extraction, retargeting, keypoint transform, stitching and synthesis for one
/// frame. Keypoints default to the frames' attached landmarks.
ReplacementResult replace_face(const Frame& motion_frame, const Frame& reference, const Mlp& decoder,
                               const ReplacementOptions& options = {},
                               const KeypointSet* kp_source = nullptr,
                               const KeypointSet* kp_reference = nullptr);

}  // namespace trihead
