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

#include "trihead/core/optimizer.hpp"

#include <cmath>

#include "trihead/core/error.hpp"

namespace trihead {

void optimizer_step(OptimizerState& state, std::span<const ParamGroup> groups) {
  if (!(state.learning_rate > 0.0)) fail(ErrorCode::invalid_argument, "learning rate must be positive");
  for (const auto& g : groups) {
    require_size("gradient for " + g.name, g.values.size(), g.grads.size());
    for (std::size_t i = 0; i < g.grads.size(); ++i) {
      if (!std::isfinite(g.grads[i])) {
        fail(ErrorCode::non_finite, "gradient " + g.name + "[" + std::to_string(i) + "]");
      }
    }
  }

  if (state.method == OptimizerMethod::sgd) {
    for (const auto& g : groups) {
      for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] -= state.learning_rate * g.grads[i];
    }
    ++state.step;
    return;
  }

  if (state.m.size() != groups.size()) {
    state.m.assign(groups.size(), {});
    state.v.assign(groups.size(), {});
  }
  for (std::size_t k = 0; k < groups.size(); ++k) {
    if (state.m[k].size() != groups[k].values.size()) {
      state.m[k].assign(groups[k].values.size(), 0.0);
      state.v[k].assign(groups[k].values.size(), 0.0);
    }
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  const double b1 = state.beta1;
  const double b2 = state.beta2;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    const auto& g = groups[k];
    double* m = state.m[k].data();
    double* v = state.v[k].data();
    for (std::size_t i = 0; i < g.values.size(); ++i) {
      const double grad = g.grads[i];
      m[i] = b1 * m[i] + (1.0 - b1) * grad;
      v[i] = b2 * v[i] + (1.0 - b2) * grad * grad;
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      g.values[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

}  // namespace trihead
