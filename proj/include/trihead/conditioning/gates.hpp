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
#include <vector>

#include "trihead/core/mlp.hpp"
#include "trihead/core/types.hpp"

namespace trihead {

/// Region-attention gates. mlp_a maps f_x to a d_a-wide sigmoid gate over the audio
/// embedding; mlp_b maps f_x to a scalar sigmoid gate over the blink signal.
struct GateNets {
  Mlp mlp_a;
  Mlp mlp_b;

  static GateNets create(int feature_dim, int d_a, int hidden, std::uint64_t seed);
  int feature_dim() const { return mlp_a.input_size(); }
  int d_a() const { return mlp_a.output_size(); }
  void validate() const;
};

struct AudioGate {
  std::vector<double> gate;   // v_a(x), in (0,1)^d_a
  std::vector<double> gated;  // v_a(x) * e_A, element-wise
};

AudioGate condition_audio(const GateNets& gates, std::span<const double> f_x,
                          std::span<const double> e_a);

struct BlinkGate {
  double gate = 0.0;   // v_b(x)
  double value = 0.0;  // v_b(x) * B
};

/// B outside [0, 1] is clamped and counted.
BlinkGate condition_blink(const GateNets& gates, std::span<const double> f_x, double blink,
                          ClampCounter* clamps = nullptr);

}  // namespace trihead
