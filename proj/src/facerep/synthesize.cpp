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

#include "trihead/facerep/synthesize.hpp"

#include <algorithm>

#include "trihead/core/error.hpp"
#include "trihead/core/mlp_kernel.hpp"

namespace trihead {

Mlp make_identity_decoder(int hidden, std::uint64_t seed) {
  Mlp net = Mlp::glorot({kDecoderInputs, hidden, hidden, 3}, Activation::relu, Activation::identity, seed);
  net.layers().back().weight.setZero();
  net.layers().back().bias.setZero();
  return net;
}

Frame apply_decoder(const Mlp& decoder, const Frame& in) {
  require_size("decoder input width", kDecoderInputs, decoder.input_size());
  require_size("decoder output width", 3, decoder.output_size());
  const MlpKernel<InferReal> kernel(decoder);
  Frame out(in.width, in.height);
  out.index = in.index;
  out.landmarks = in.landmarks;
  const int w = in.width;
  const int h = in.height;
#pragma omp parallel
  {
    MatrixX<InferReal> x(kDecoderInputs, w);
    MlpTape<InferReal> tape;
#pragma omp for schedule(static)
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        int k = 0;
        for (int dr = -1; dr <= 1; ++dr) {
          const int rr = std::clamp(r + dr, 0, h - 1);
          for (int dc = -1; dc <= 1; ++dc) {
            const int cc = std::clamp(c + dc, 0, w - 1);
            for (int ch = 0; ch < 3; ++ch) x(k++, c) = static_cast<InferReal>(in.at(rr, cc, ch));
          }
        }
      }
      const MatrixX<InferReal>& res = kernel.forward(x, tape);
      for (int c = 0; c < w; ++c) {
        for (int ch = 0; ch < 3; ++ch) {
          out.at(r, c, ch) = std::clamp(in.at(r, c, ch) + static_cast<double>(res(ch, c)), 0.0, 1.0);
        }
      }
    }
  }
  return out;
}

Frame synthesize(const Frame& motion_frame, const Frame& reference, const KeypointSet& x_p,
                 const KeypointSet& kp_motion_src, const Mlp& decoder, const FaceRegionMask& mask,
                 double bandwidth) {
  require_same_size(motion_frame, reference, "synthesize frames");
  if (mask.width != motion_frame.width || mask.height != motion_frame.height) {
    fail(ErrorCode::dimension_mismatch, "face mask size does not match frame");
  }
  const Frame warped =
      apply_warp(motion_frame, build_warp(kp_motion_src, x_p, motion_frame.width, motion_frame.height, bandwidth));
  Frame composited(motion_frame.width, motion_frame.height);
  composited.index = motion_frame.index;
  for (std::size_t p = 0; p < composited.pixel_count(); ++p) {
    const double m = mask.values[p];
    for (int ch = 0; ch < 3; ++ch) {
      composited.rgb[p * 3 + ch] = m * warped.rgb[p * 3 + ch] + (1.0 - m) * reference.rgb[p * 3 + ch];
    }
  }
  Frame out = apply_decoder(decoder, composited);
  out.landmarks = x_p;
  return out;
}

ReplacementResult replace_face(const Frame& motion_frame, const Frame& reference, const Mlp& decoder,
                               const ReplacementOptions& options, const KeypointSet* kp_source,
                               const KeypointSet* kp_reference) {
  if (kp_source == nullptr) {
    if (!motion_frame.landmarks) fail(ErrorCode::keypoints_required, "motion frame has no keypoints");
    kp_source = &*motion_frame.landmarks;
  }
  if (kp_reference == nullptr) {
    if (!reference.landmarks) fail(ErrorCode::keypoints_required, "reference frame has no keypoints");
    kp_reference = &*reference.landmarks;
  }
  ReplacementResult out;
  out.motion = extract_motion(motion_frame, reference, kp_source, kp_reference);
  const double aspect = static_cast<double>(reference.width) / reference.height;
  const KeypointSet x_p = transform_keypoints(retarget(out.motion), aspect);
  const FaceRegionMask mask =
      fit_face_mask(*kp_reference, reference.width, reference.height, options.mask_falloff, options.mask_exponent);
  out.keypoints = stitch_keypoints(x_p, *kp_reference, mask);
  const double bandwidth = options.bandwidth_factor * std::min(reference.width, reference.height);
  out.frame = synthesize(motion_frame, reference, out.keypoints, *kp_source, decoder, mask, bandwidth);
  return out;
}

}  // namespace trihead
