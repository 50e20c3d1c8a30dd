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

/// Per-ray samples after the field query. positions is optional bookkeeping.
struct SampleBatch {
  std::vector<Vec3> positions;
  std::vector<double> delta;
  std::vector<double> sigma;
  std::vector<Vec3> color;

  std::size_t size() const { return delta.size(); }
  /// Throws unless sizes agree, delta > 0, sigma >= 0 and colors lie in [0,1].
  void validate() const;
};

struct CompositeResult {
  Vec3 color = Vec3::Zero();
  std::vector<double> weights;        // T_k * alpha_k
  std::vector<double> transmittance;  // T_1 .. T_{P+1}
  double residual_transmittance = 1.0;
};

/// alpha_k = 1 - exp(-sigma_k delta_k), T_k = prod_{m<k} (1 - alpha_m),
/// C = sum_k T_k alpha_k c_k + T_{P+1} background. Weights are filled when requested.
CompositeResult composite_ray(const SampleBatch& samples, const Vec3& background,
                              bool keep_weights = false);

struct CompositeGrad {
  std::vector<double> d_sigma;
  std::vector<Vec3> d_color;
};

/// Gradient of <upstream, C> with respect to every sigma_k and c_k.
CompositeGrad composite_backprop(const SampleBatch& samples, const Vec3& background,
                                 const Vec3& upstream);

}  // namespace trihead
