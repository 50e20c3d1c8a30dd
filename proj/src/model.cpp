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

#include "trihead/model.hpp"

#include "trihead/core/error.hpp"
#include "trihead/facerep/synthesize.hpp"

namespace trihead {

void ModelConfig::validate() const {
  if (d_a <= 0 || d_a % 2 != 0) fail(ErrorCode::invalid_argument, "d_a must be a positive even number");
  if (landmarks <= 0) fail(ErrorCode::invalid_argument, "landmark count must be positive");
  if (gate_hidden <= 0 || trunk_hidden <= 0 || geo_features <= 0 || color_hidden <= 0 ||
      decoder_hidden <= 0) {
    fail(ErrorCode::invalid_argument, "network widths must be positive");
  }
  if (layout.resolutions.empty() || layout.feature_dim_per_level <= 0) {
    fail(ErrorCode::invalid_argument, "tri-plane layout needs at least one level");
  }
}

Model Model::create(const ModelConfig& config) {
  config.validate();
  Model m;
  m.config = config;
  m.grid = TriPlaneGrid::create(config.layout, config.box, config.seed);
  const int fd = m.grid.output_dim();
  m.gates = GateNets::create(fd, config.d_a, config.gate_hidden, config.seed + 101);
  m.field = RadianceField::create(fd, config.d_a, config.trunk_hidden, config.geo_features,
                                  config.color_hidden, config.seed + 202);
  m.decoder = make_identity_decoder(config.decoder_hidden, config.seed + 303);
  m.normalizer = EmbeddingNormalizer::identity(config.d_a);
  return m;
}

std::size_t Model::parameter_count() const {
  return grid.parameter_count() + gates.mlp_a.parameter_count() + gates.mlp_b.parameter_count() +
         field.trunk.parameter_count() + field.color.parameter_count() + decoder.parameter_count() +
         normalizer.mean.size() + normalizer.inv_scale.size();
}

std::vector<double> Model::parameters() const {
  std::vector<double> out(parameter_count());
  std::span<double> rest(out);
  auto put = [&rest](const auto& member) {
    const std::size_t n = member.parameter_count();
    member.copy_parameters_to(rest.first(n));
    rest = rest.subspan(n);
  };
  put(grid);
  put(gates.mlp_a);
  put(gates.mlp_b);
  put(field.trunk);
  put(field.color);
  put(decoder);
  std::copy(normalizer.mean.begin(), normalizer.mean.end(), rest.begin());
  rest = rest.subspan(normalizer.mean.size());
  std::copy(normalizer.inv_scale.begin(), normalizer.inv_scale.end(), rest.begin());
  return out;
}

void Model::set_parameters(std::span<const double> in) {
  require_size("model parameters", parameter_count(), in.size());
  auto take = [&in](auto& member) {
    const std::size_t n = member.parameter_count();
    member.set_parameters(in.first(n));
    in = in.subspan(n);
  };
  take(grid);
  take(gates.mlp_a);
  take(gates.mlp_b);
  take(field.trunk);
  take(field.color);
  take(decoder);
  const std::size_t d = normalizer.mean.size();
  std::copy(in.begin(), in.begin() + d, normalizer.mean.begin());
  std::copy(in.begin() + d, in.begin() + 2 * d, normalizer.inv_scale.begin());
}

void Model::validate() const {
  grid.validate();
  gates.validate();
  field.validate();
  decoder.validate();
  const int fd = grid.output_dim();
  require_size("gate feature width", fd, gates.feature_dim());
  require_size("field feature width", fd, field.feature_dim());
  if (gates.d_a() != config.d_a) {
    fail(ErrorCode::dimension_mismatch, "d_a: gates have " + std::to_string(gates.d_a()) +
                                            ", config has " + std::to_string(config.d_a));
  }
  if (field.d_a() != config.d_a) {
    fail(ErrorCode::dimension_mismatch, "d_a: field has " + std::to_string(field.d_a()) +
                                            ", config has " + std::to_string(config.d_a));
  }
  require_size("normalizer mean", config.d_a, normalizer.mean.size());
  require_size("normalizer scale", config.d_a, normalizer.inv_scale.size());
}

ModelGradient ModelGradient::zeros_like(const Model& model) {
  return {TriPlaneGradient::zeros_like(model.grid), GradBundle::zeros_like(model.gates.mlp_a),
          GradBundle::zeros_like(model.gates.mlp_b), GradBundle::zeros_like(model.field.trunk),
          GradBundle::zeros_like(model.field.color)};
}

void ModelGradient::set_zero() {
  grid.set_zero();
  mlp_a.set_zero();
  mlp_b.set_zero();
  trunk.set_zero();
  color.set_zero();
}

ModelGradient& ModelGradient::operator+=(const ModelGradient& other) {
  grid += other.grid;
  mlp_a += other.mlp_a;
  mlp_b += other.mlp_b;
  trunk += other.trunk;
  color += other.color;
  return *this;
}

}  // namespace trihead
