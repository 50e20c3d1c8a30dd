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

namespace trihead {

/// Pinhole camera. The orientation's columns are the camera's right, up and backward
/// axes in world space; the camera looks along -z of its own frame.
struct Camera {
  Vec3 position = Vec3(0.0, 0.0, 2.6);
  Mat3 orientation = Mat3::Identity();
  double focal = 96.0;  // pixels
  int width = 64;
  int height = 64;
  double near = 1.6;
  double far = 3.6;

  /// Throws unless the orientation is orthonormal within 1e-9 and 0 < near < far.
  void validate() const;

  static Camera look_at(const Vec3& eye, const Vec3& target, const Vec3& up, double focal,
                        int width, int height, double near, double far);

  /// Camera on a sphere of radius `distance` around the origin, looking at it.
  /// Azimuth rotates about +y, elevation tilts toward +y; (0, 0) sits on +z.
  static Camera orbit(double azimuth_deg, double elevation_deg, double distance,
                      double focal_factor, int width, int height, double depth_margin = 1.0);

  /// Continuous pixel coordinates (x right, y down; pixel (r, c) spans [c, c+1) x [r, r+1)).
  Vec2 project(const Vec3& world) const;
};

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit length
  int row = 0;
  int col = 0;
};

Vec3 pixel_direction(const Camera& camera, int row, int col);

/// One ray per pixel centre, row-major.
std::vector<Ray> generate_rays(const Camera& camera);

}  // namespace trihead
