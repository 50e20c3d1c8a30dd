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

enum class OptimizerMethod { sgd, adam };

/// A named block of trainable values and the matching gradient.
struct ParamGroup {
  std::string name;
  std::span<double> values;
  std::span<const double> grads;
};

struct OptimizerState {
  OptimizerMethod method = OptimizerMethod::adam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  // Adam moments, one buffer per group, sized on the first step.
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
};

/// sgd: p <- p - lr * g. adam: bias-corrected first/second moment update.
/// Every gradient is checked before any value changes; a non-finite entry throws
/// ErrorCode::non_finite naming the group and index, leaving params and state intact.
void optimizer_step(OptimizerState& state, std::span<const ParamGroup> groups);

}  // namespace trihead
