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

#include "trihead/conditioning/gates.hpp"

#include <algorithm>

#include "trihead/core/error.hpp"

namespace trihead {

GateNets GateNets::create(int feature_dim, int d_a, int hidden, std::uint64_t seed) {
  GateNets g;
  g.mlp_a = Mlp::glorot({feature_dim, hidden, d_a}, Activation::relu, Activation::sigmoid, seed);
  g.mlp_b = Mlp::glorot({feature_dim, hidden, 1}, Activation::relu, Activation::sigmoid, seed + 1);
  return g;
}

void GateNets::validate() const {
  mlp_a.validate();
  mlp_b.validate();
  if (mlp_a.output_activation() != Activation::sigmoid || mlp_b.output_activation() != Activation::sigmoid) {
    fail(ErrorCode::malformed, "gate networks must end in a sigmoid");
  }
  require_size("mlp_b input", static_cast<std::size_t>(mlp_a.input_size()), static_cast<std::size_t>(mlp_b.input_size()));
  require_size("mlp_b output", 1, static_cast<std::size_t>(mlp_b.output_size()));
}

AudioGate condition_audio(const GateNets& gates, std::span<const double> f_x,
                          std::span<const double> e_a) {
  require_size("audio embedding", static_cast<std::size_t>(gates.d_a()), e_a.size());
  const Eigen::VectorXd v = mlp_eval(gates.mlp_a, f_x);
  AudioGate out;
  out.gate.assign(v.data(), v.data() + v.size());
  out.gated.resize(e_a.size());
  for (std::size_t i = 0; i < e_a.size(); ++i) out.gated[i] = out.gate[i] * e_a[i];
  return out;
}

BlinkGate condition_blink(const GateNets& gates, std::span<const double> f_x, double blink,
                          ClampCounter* clamps) {
  if (blink < 0.0 || blink > 1.0) {
    if (clamps != nullptr) clamps->bump();
    blink = std::clamp(blink, 0.0, 1.0);
  }
  const Eigen::VectorXd v = mlp_eval(gates.mlp_b, f_x);
  return {v(0), v(0) * blink};
}

}  // namespace trihead
