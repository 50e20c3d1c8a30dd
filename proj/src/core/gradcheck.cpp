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

#include "trihead/core/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "trihead/core/error.hpp"
#include "trihead/core/rng.hpp"

namespace trihead {

double relative_error(double analytic, double numeric, double floor) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / scale;
}

GradCheckReport check_gradients(std::span<double> params, std::span<const double> analytic,
                                const std::function<double()>& objective, double step,
                                std::span<const std::size_t> indices) {
  require_size("analytic gradient", params.size(), analytic.size());
  GradCheckReport report;
  auto visit = [&](std::size_t i) {
    const double saved = params[i];
    params[i] = saved + step;
    const double up = objective();
    params[i] = saved - step;
    const double down = objective();
    params[i] = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double err = relative_error(analytic[i], numeric);
    if (report.checked == 0 || err > report.max_relative_error) {
      report.max_relative_error = err;
      report.worst_index = i;
      report.worst_analytic = analytic[i];
      report.worst_numeric = numeric;
    }
    ++report.checked;
  };
  if (indices.empty()) {
    for (std::size_t i = 0; i < params.size(); ++i) visit(i);
  } else {
    for (std::size_t i : indices) visit(i);
  }
  return report;
}

GradCheckReport check_gradients(const Mlp& net, std::span<const double> x, double step) {
  Rng rng(0x5eed);
  std::vector<double> upstream(static_cast<std::size_t>(net.output_size()));
  for (double& u : upstream) u = rng.uniform(-1.0, 1.0);

  const GradBundle g = mlp_backprop(net, x, upstream);
  const std::size_t n_params = net.parameter_count();
  std::vector<double> flat(n_params + x.size());
  net.copy_parameters_to(std::span(flat).first(n_params));
  std::copy(x.begin(), x.end(), flat.begin() + static_cast<std::ptrdiff_t>(n_params));
  std::vector<double> analytic(flat.size());
  g.copy_parameters_to(std::span(analytic).first(n_params));
  for (std::size_t i = 0; i < x.size(); ++i) analytic[n_params + i] = g.input(static_cast<Eigen::Index>(i));

  Mlp probe = net;
  auto objective = [&]() {
    probe.set_parameters(std::span<const double>(flat).first(n_params));
    const Eigen::VectorXd y = mlp_eval(probe, std::span<const double>(flat).subspan(n_params));
    double s = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) s += upstream[static_cast<std::size_t>(i)] * y(i);
    return s;
  };
  return check_gradients(flat, analytic, objective, step);
}

}  // namespace trihead
