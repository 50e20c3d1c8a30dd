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
#include <span>
#include <string>
#include <vector>

namespace trihead {

enum class SampleMode { uniform, stratified };

SampleMode parse_sample_mode(const std::string& name);

struct SampleKey {
  std::uint64_t seed = 0;
  std::uint64_t frame = 0;
  std::uint64_t pixel = 0;
};

/// Writes P ascending depths in [near, far) and their segment lengths into the spans
/// (both of length P). Uniform mode uses bin left edges; stratified mode draws one
/// point per equal bin.
void sample_depths(double near, double far, SampleMode mode, const SampleKey& key,
                   std::span<double> depth, std::span<double> delta);

struct RaySamples {
  std::vector<double> depth;
  std::vector<double> delta;
};

RaySamples sample_ray(double near, double far, int points, SampleMode mode, const SampleKey& key);

}  // namespace trihead
