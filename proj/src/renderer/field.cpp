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

#include "trihead/renderer/field.hpp"

#include <vector>

#include "trihead/core/error.hpp"

namespace trihead {

RadianceField RadianceField::create(int feature_dim, int d_a, int trunk_hidden, int geo_features,
                                    int color_hidden, std::uint64_t seed) {
  if (feature_dim <= 0 || d_a <= 0 || trunk_hidden <= 0 || geo_features <= 0 || color_hidden <= 0) {
    fail(ErrorCode::invalid_argument, "radiance field sizes must be positive");
  }
  RadianceField f;
  f.trunk = Mlp::glorot({feature_dim + d_a + 1, trunk_hidden, 1 + geo_features}, Activation::relu,
                        Activation::identity, seed);
  f.color = Mlp::glorot({geo_features + 3, color_hidden, 3}, Activation::relu, Activation::sigmoid,
                        seed + 1);
  f.audio_dim = d_a;
  return f;
}

void RadianceField::validate() const {
  trunk.validate();
  color.validate();
  if (audio_dim <= 0 || feature_dim() <= 0) fail(ErrorCode::dimension_mismatch, "radiance field trunk width");
  require_size("color head input", geo_features() + 3, color.input_size());
  require_size("color head output", 3, color.output_size());
  if (color.activation_for(color.layer_count() - 1) != Activation::sigmoid) {
    fail(ErrorCode::malformed, "color head must end in sigmoid");
  }
}

FieldSample query_field(const RadianceField& field, std::span<const double> f_x,
                        const Vec3& view_dir, std::span<const double> e_a_gated, double e_b_gated) {
  require_size("query_field f_x", field.feature_dim(), f_x.size());
  require_size("query_field e_A", field.d_a(), e_a_gated.size());
  std::vector<double> in;
  in.reserve(static_cast<std::size_t>(field.trunk.input_size()));
  in.insert(in.end(), f_x.begin(), f_x.end());
  in.insert(in.end(), e_a_gated.begin(), e_a_gated.end());
  in.push_back(e_b_gated);
  const Eigen::VectorXd trunk = mlp_eval(field.trunk, in);

  std::vector<double> color_in(trunk.data() + 1, trunk.data() + trunk.size());
  color_in.insert(color_in.end(), {view_dir.x(), view_dir.y(), view_dir.z()});
  const Eigen::VectorXd rgb = mlp_eval(field.color, color_in);

  FieldSample out;
  out.sigma = activate(Activation::softplus, trunk[0]);
  out.rgb = rgb.head<3>();
  return out;
}

}  // namespace trihead
