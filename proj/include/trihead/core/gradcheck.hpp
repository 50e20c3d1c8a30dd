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

#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "trihead/core/mlp.hpp"

namespace trihead {

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;  // flat parameter index of the worst entry
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t checked = 0;
};

/// |a - n| / max(|a|, |n|, floor). The floor keeps entries whose true gradient is
/// essentially zero from reporting rounding noise as a large relative error.
inline constexpr double kGradCheckFloor = 1e-6;
double relative_error(double analytic, double numeric, double floor = kGradCheckFloor);

/// Compares `analytic[i]` with the central difference of `objective` as params[i] is
/// perturbed by +-step. params are restored exactly. `indices` limits the check to a
/// subset; empty means all.
GradCheckReport check_gradients(std::span<double> params, std::span<const double> analytic,
                                const std::function<double()>& objective, double step,
                                std::span<const std::size_t> indices = {});

/// Checks mlp_backprop for the objective w . mlp_eval(net, x), where w is a fixed
/// pseudo-random upstream vector. Parameters come first in the flat index, then x.
GradCheckReport check_gradients(const Mlp& net, std::span<const double> x, double step);

}  // namespace trihead
