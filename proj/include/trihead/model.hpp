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

#include "trihead/conditioning/audio.hpp"
#include "trihead/conditioning/gates.hpp"
#include "trihead/core/mlp.hpp"
#include "trihead/renderer/field.hpp"
#include "trihead/triplane.hpp"

namespace trihead {

/// Architecture of a trained head model. Everything here is echoed into checkpoints.
struct ModelConfig {
  TriPlaneLayout layout;
  BoundingBox box;
  int d_a = 32;
  int landmarks = 68;
  int gate_hidden = 8;
  int trunk_hidden = 32;
  int geo_features = 15;
  int color_hidden = 16;
  int decoder_hidden = 16;
  Vec3 background = Vec3::Zero();
  std::uint64_t seed = 7;

  void validate() const;
};

struct Model {
  ModelConfig config;
  TriPlaneGrid grid;
  GateNets gates;
  RadianceField field;
  Mlp decoder;
  EmbeddingNormalizer normalizer;

  static Model create(const ModelConfig& config);

  int d_h() const { return grid.d_h(); }
  int d_a() const { return config.d_a; }

  /// Flat enumeration: tri-plane tables, mlp_a, mlp_b, trunk, color head, decoder,
  /// normalizer mean, normalizer inverse scale.
  std::size_t parameter_count() const;
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> in);

  /// Throws dimension_mismatch when members disagree on d_h or d_a.
  void validate() const;
};

/// Gradients for every trainable member (the decoder and normalizer are not trained here).
struct ModelGradient {
  TriPlaneGradient grid;
  GradBundle mlp_a;
  GradBundle mlp_b;
  GradBundle trunk;
  GradBundle color;

  static ModelGradient zeros_like(const Model& model);
  void set_zero();
  ModelGradient& operator+=(const ModelGradient& other);
};

}  // namespace trihead
