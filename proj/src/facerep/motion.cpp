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

#include "trihead/facerep/motion.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "trihead/core/error.hpp"

namespace trihead {

Similarity align_similarity(const std::vector<Vec3>& src, const std::vector<Vec3>& dst) {
  require_size("alignment keypoints", src.size(), dst.size());
  if (src.empty()) fail(ErrorCode::degenerate_landmarks, "no keypoints to align");
  const double n = static_cast<double>(src.size());
  Vec3 mu_s = Vec3::Zero();
  Vec3 mu_d = Vec3::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    mu_s += src[i];
    mu_d += dst[i];
  }
  mu_s /= n;
  mu_d /= n;

  Mat3 cov = Mat3::Zero();
  Mat3 scatter = Mat3::Zero();
  double var_s = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const Vec3 a = src[i] - mu_s;
    const Vec3 b = dst[i] - mu_d;
    cov += b * a.transpose();
    scatter += a * a.transpose();
    var_s += a.squaredNorm();
  }
  cov /= n;
  var_s /= n;

  const Eigen::JacobiSVD<Mat3> rank_check(scatter);
  const Vec3 sv = rank_check.singularValues();
  if (!(sv[0] > 0.0) || sv[1] <= 1e-12 * sv[0]) {
    fail(ErrorCode::degenerate_landmarks, "keypoints span fewer than two dimensions");
  }

  const Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 fix = Mat3::Identity();
  if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0.0) fix(2, 2) = -1.0;
  Similarity out;
  out.rotation = svd.matrixU() * fix * svd.matrixV().transpose();
  out.scale = (svd.singularValues().asDiagonal() * fix).trace() / var_s;
  out.translation = mu_d - out.scale * (out.rotation * mu_s);
  return out;
}

void MotionParams::validate() const {
  const double err = (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (!(err <= 1e-9)) fail(ErrorCode::invalid_argument, "motion rotation is not orthonormal");
  if (!(scale > 0.0)) fail(ErrorCode::invalid_argument, "motion scale must be positive");
  require_size("motion expression deltas", canonical.size(), delta.size());
}

std::vector<Vec3> lift_keypoints(const KeypointSet& kp, double aspect) {
  std::vector<Vec3> out;
  out.reserve(kp.size());
  for (const Vec2& p : kp.points) {
    if (!p.allFinite()) fail(ErrorCode::non_finite, "keypoint is not finite");
    out.emplace_back(p.x() * aspect, p.y(), 0.0);
  }
  return out;
}

MotionParams extract_motion(const Frame& motion_frame, const Frame& reference,
                            const KeypointSet* kp_source, const KeypointSet* kp_reference) {
  if (kp_source == nullptr) {
    if (!motion_frame.landmarks) fail(ErrorCode::keypoints_required, "motion frame has no keypoints");
    kp_source = &*motion_frame.landmarks;
  }
  if (kp_reference == nullptr) {
    if (!reference.landmarks) fail(ErrorCode::keypoints_required, "reference frame has no keypoints");
    kp_reference = &*reference.landmarks;
  }
  require_size("landmark count", kp_reference->size(), kp_source->size());
  const double aspect = reference.height > 0 ? static_cast<double>(reference.width) / reference.height : 1.0;
  const std::vector<Vec3> src = lift_keypoints(*kp_source, aspect);
  const std::vector<Vec3> ref = lift_keypoints(*kp_reference, aspect);
  const Similarity sim = align_similarity(src, ref);

  MotionParams m;
  m.scale = sim.scale;
  m.rotation = sim.rotation;
  m.translation = sim.translation;
  m.canonical = ref;
  m.delta.resize(ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) m.delta[i] = sim.apply(src[i]) - ref[i];
  return m;
}

MotionParams retarget(const MotionParams& motion) {
  MotionParams out = motion;
  out.scale = 1.0;
  out.rotation = Mat3::Identity();
  out.translation = Vec3::Zero();
  return out;
}

KeypointSet transform_keypoints(const MotionParams& motion, double aspect, ClampCounter* clamps) {
  motion.validate();
  KeypointSet out;
  out.points.reserve(motion.landmark_count());
  for (std::size_t i = 0; i < motion.landmark_count(); ++i) {
    const Vec3 x = motion.scale * (motion.rotation * (motion.canonical[i] + motion.delta[i])) + motion.translation;
    Vec2 p(x.x() / aspect, x.y());
    const Vec2 c = p.cwiseMax(0.0).cwiseMin(1.0);
    if (c != p && clamps != nullptr) clamps->bump();
    out.points.push_back(c);
  }
  return out;
}

FaceRegionMask FaceRegionMask::constant(int width, int height, double value) {
  return {width, height, std::vector<double>(static_cast<std::size_t>(width) * height, value)};
}

double FaceRegionMask::sample(const Vec2& uv) const {
  const int col = std::clamp(static_cast<int>(std::floor(uv.x() * width)), 0, width - 1);
  const int row = std::clamp(static_cast<int>(std::floor(uv.y() * height)), 0, height - 1);
  return at(row, col);
}

FaceRegionMask fit_face_mask(const KeypointSet& kp, int width, int height, double falloff, double exponent) {
  if (kp.size() == 0) fail(ErrorCode::degenerate_landmarks, "face mask needs keypoints");
  if (!(falloff > 0.0) || !(exponent > 0.0)) fail(ErrorCode::invalid_argument, "face mask falloff and exponent");
  Vec2 lo = kp.points[0];
  Vec2 hi = kp.points[0];
  for (const Vec2& p : kp.points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double cx = 0.5 * (lo.x() + hi.x()) * width;
  const double cy = 0.5 * (lo.y() + hi.y()) * height;
  const double hx = std::max(0.5 * (hi.x() - lo.x()) * width, 1.0);
  const double hy = std::max(0.5 * (hi.y() - lo.y()) * height, 1.0);
  // Radial units: the half-width maps to 1, so a band of `falloff` box widths is 2 * falloff.
  const double band = 2.0 * falloff;

  FaceRegionMask mask = FaceRegionMask::constant(width, height, 0.0);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const double x = std::abs((c + 0.5 - cx) / hx);
      const double y = std::abs((r + 0.5 - cy) / hy);
      const double rho = std::pow(std::pow(x, exponent) + std::pow(y, exponent), 1.0 / exponent);
      const double t = std::clamp((rho - 1.0) / band, 0.0, 1.0);
      mask.values[static_cast<std::size_t>(r) * width + c] = 1.0 - t * t * (3.0 - 2.0 * t);
    }
  }
  return mask;
}

KeypointSet stitch_keypoints(const KeypointSet& x_p, const KeypointSet& x_ref, const FaceRegionMask& mask) {
  require_size("stitch landmark count", x_ref.size(), x_p.size());
  KeypointSet out;
  out.points.reserve(x_p.size());
  for (std::size_t i = 0; i < x_p.size(); ++i) {
    const double m = mask.sample(x_ref.points[i]);
    out.points.push_back(m * x_p.points[i] + (1.0 - m) * x_ref.points[i]);
  }
  return out;
}

}  // namespace trihead
