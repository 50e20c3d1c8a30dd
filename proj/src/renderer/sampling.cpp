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

#include "trihead/renderer/sampling.hpp"

#include "trihead/core/error.hpp"
#include "trihead/core/rng.hpp"

namespace trihead {

SampleMode parse_sample_mode(const std::string& name) {
  if (name == "uniform") return SampleMode::uniform;
  if (name == "stratified") return SampleMode::stratified;
  fail(ErrorCode::invalid_argument, "unknown sample mode '" + name + "'");
}

void sample_depths(double near, double far, SampleMode mode, const SampleKey& key,
                   std::span<double> depth, std::span<double> delta) {
  const std::size_t points = depth.size();
  if (points < 2) fail(ErrorCode::invalid_argument, "sample_ray needs P >= 2");
  if (delta.size() != points) fail(ErrorCode::dimension_mismatch, "sample_ray delta span");
  if (!(near < far)) fail(ErrorCode::invalid_argument, "sample_ray needs near < far");
  const double bin = (far - near) / static_cast<double>(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double jitter =
        mode == SampleMode::stratified ? counter_uniform(key.seed, key.frame, key.pixel, k) : 0.0;
    depth[k] = near + (static_cast<double>(k) + jitter) * bin;
  }
  for (std::size_t k = 0; k + 1 < points; ++k) delta[k] = depth[k + 1] - depth[k];
  delta[points - 1] = far - depth[points - 1];
}

RaySamples sample_ray(double near, double far, int points, SampleMode mode, const SampleKey& key) {
  if (points < 2) fail(ErrorCode::invalid_argument, "sample_ray needs P >= 2");
  RaySamples out;
  out.depth.resize(static_cast<std::size_t>(points));
  out.delta.resize(static_cast<std::size_t>(points));
  sample_depths(near, far, mode, key, out.depth, out.delta);
  return out;
}

}  // namespace trihead
