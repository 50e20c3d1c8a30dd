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

#include "trihead/renderer/camera.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "trihead/core/error.hpp"

namespace trihead {

void Camera::validate() const {
  const double err = (orientation.transpose() * orientation - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (!(err <= 1e-9)) fail(ErrorCode::invalid_argument, "camera orientation is not orthonormal");
  if (!(near > 0.0 && near < far)) fail(ErrorCode::invalid_argument, "camera requires 0 < near < far");
  if (width <= 0 || height <= 0 || !(focal > 0.0)) fail(ErrorCode::invalid_argument, "camera image size and focal");
}

Camera Camera::look_at(const Vec3& eye, const Vec3& target, const Vec3& up, double focal, int width,
                       int height, double near, double far) {
  Camera cam;
  const Vec3 back = (eye - target).normalized();
  const Vec3 right = up.cross(back).normalized();
  const Vec3 true_up = back.cross(right);
  cam.position = eye;
  cam.orientation.col(0) = right;
  cam.orientation.col(1) = true_up;
  cam.orientation.col(2) = back;
  cam.focal = focal;
  cam.width = width;
  cam.height = height;
  cam.near = near;
  cam.far = far;
  return cam;
}

Camera Camera::orbit(double azimuth_deg, double elevation_deg, double distance, double focal_factor,
                     int width, int height, double depth_margin) {
  const double az = azimuth_deg * std::numbers::pi / 180.0;
  const double el = elevation_deg * std::numbers::pi / 180.0;
  const Vec3 eye(distance * std::sin(az) * std::cos(el), distance * std::sin(el),
                 distance * std::cos(az) * std::cos(el));
  return look_at(eye, Vec3::Zero(), Vec3::UnitY(), focal_factor * height, width, height,
                 distance - depth_margin, distance + depth_margin);
}

Vec2 Camera::project(const Vec3& world) const {
  const Vec3 c = orientation.transpose() * (world - position);
  const double depth = -c.z();
  return {focal * c.x() / depth + 0.5 * width, -focal * c.y() / depth + 0.5 * height};
}

Vec3 pixel_direction(const Camera& camera, int row, int col) {
  const double cx = 0.5 * camera.width;
  const double cy = 0.5 * camera.height;
  const Vec3 d((col + 0.5 - cx) / camera.focal, -(row + 0.5 - cy) / camera.focal, -1.0);
  return (camera.orientation * d).normalized();
}

std::vector<Ray> generate_rays(const Camera& camera) {
  std::vector<Ray> rays;
  rays.reserve(static_cast<std::size_t>(camera.width) * camera.height);
  for (int r = 0; r < camera.height; ++r) {
    for (int c = 0; c < camera.width; ++c) rays.push_back({camera.position, pixel_direction(camera, r, c), r, c});
  }
  return rays;
}

}  // namespace trihead
