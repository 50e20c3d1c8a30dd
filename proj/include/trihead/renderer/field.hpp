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

#include "trihead/core/mlp.hpp"
#include "trihead/core/types.hpp"

namespace trihead {

/// Conditioned radiance field. The trunk consumes [f_x, gated e_A, gated e_B] and emits
/// one density logit plus geometry features; the color head consumes the geometry
/// features and the raw view direction.
struct RadianceField {
  Mlp trunk;
  Mlp color;
  int audio_dim = 0;

  static RadianceField create(int feature_dim, int d_a, int trunk_hidden, int geo_features,
                              int color_hidden, std::uint64_t seed);

  int feature_dim() const { return trunk.input_size() - audio_dim - 1; }
  int d_a() const { return audio_dim; }
  int geo_features() const { return trunk.output_size() - 1; }
  /// 3 * d_h + 3 + d_a + 1.
  int input_width() const { return feature_dim() + 3 + d_a() + 1; }
  void validate() const;
};

struct FieldSample {
  double sigma = 0.0;
  Vec3 rgb = Vec3::Zero();
};

FieldSample query_field(const RadianceField& field, std::span<const double> f_x,
                        const Vec3& view_dir, std::span<const double> e_a_gated, double e_b_gated);

}  // namespace trihead
