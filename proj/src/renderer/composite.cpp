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

#include "trihead/renderer/composite.hpp"

#include <cmath>

#include "trihead/core/error.hpp"

namespace trihead {

void SampleBatch::validate() const {
  require_size("sample batch sigma", delta.size(), sigma.size());
  require_size("sample batch color", delta.size(), color.size());
  if (!positions.empty()) require_size("sample batch positions", delta.size(), positions.size());
  for (std::size_t k = 0; k < delta.size(); ++k) {
    if (!(delta[k] > 0.0)) fail(ErrorCode::invalid_argument, "sample batch delta must be positive");
    if (!(sigma[k] >= 0.0)) fail(ErrorCode::invalid_argument, "sample batch sigma must be nonnegative");
    if (!(color[k].minCoeff() >= 0.0 && color[k].maxCoeff() <= 1.0)) {
      fail(ErrorCode::invalid_argument, "sample batch color outside [0,1]");
    }
  }
}

CompositeResult composite_ray(const SampleBatch& samples, const Vec3& background, bool keep_weights) {
  const std::size_t n = samples.size();
  CompositeResult out;
  if (keep_weights) {
    out.weights.resize(n);
    out.transmittance.resize(n + 1);
  }
  double t = 1.0;
  Vec3 c = Vec3::Zero();
  for (std::size_t k = 0; k < n; ++k) {
    // 1 - alpha computed directly keeps T_{k+1} = T_k - w_k consistent to rounding.
    const double keep = std::exp(-samples.sigma[k] * samples.delta[k]);
    const double w = t * (1.0 - keep);
    if (keep_weights) {
      out.transmittance[k] = t;
      out.weights[k] = w;
    }
    c += w * samples.color[k];
    t *= keep;
  }
  if (keep_weights) out.transmittance[n] = t;
  out.residual_transmittance = t;
  out.color = c + t * background;
  return out;
}

CompositeGrad composite_backprop(const SampleBatch& samples, const Vec3& background,
                                 const Vec3& upstream) {
  const std::size_t n = samples.size();
  std::vector<double> trans(n + 1);
  std::vector<double> weight(n);
  std::vector<double> proj(n);  // <upstream, c_k>
  trans[0] = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double keep = std::exp(-samples.sigma[k] * samples.delta[k]);
    weight[k] = trans[k] * (1.0 - keep);
    trans[k + 1] = trans[k] * keep;
    proj[k] = upstream.dot(samples.color[k]);
  }
  // dC/dsigma_k = delta_k [T_{k+1} c_k - sum_{j>k} w_j c_j - T_{P+1} bg]
  CompositeGrad g;
  g.d_sigma.resize(n);
  g.d_color.resize(n);
  double tail = trans[n] * upstream.dot(background);
  for (std::size_t k = n; k-- > 0;) {
    g.d_sigma[k] = samples.delta[k] * (trans[k + 1] * proj[k] - tail);
    g.d_color[k] = weight[k] * upstream;
    tail += weight[k] * proj[k];
  }
  return g;
}

}  // namespace trihead
