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

#include "trihead/core/mlp.hpp"

#include <cmath>

#include "trihead/core/error.hpp"
#include "trihead/core/rng.hpp"

namespace trihead {

std::string_view activation_name(Activation act) {
  switch (act) {
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::softplus: return "softplus";
    case Activation::exp: return "exp";
    case Activation::identity: return "identity";
  }
  return "identity";
}

Activation parse_activation(std::string_view name) {
  for (Activation a : {Activation::relu, Activation::sigmoid, Activation::softplus,
                       Activation::exp, Activation::identity}) {
    if (activation_name(a) == name) return a;
  }
  fail(ErrorCode::invalid_argument, "unknown activation '" + std::string(name) + "'");
}

double activate(Activation act, double z) {
  switch (act) {
    case Activation::relu: return z > 0.0 ? z : 0.0;
    case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-z));
    case Activation::softplus: return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
    case Activation::exp: return std::exp(z);
    case Activation::identity: return z;
  }
  return z;
}

double activate_derivative(Activation act, double z) {
  switch (act) {
    case Activation::relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::sigmoid: {
      const double s = 1.0 / (1.0 + std::exp(-z));
      return s * (1.0 - s);
    }
    case Activation::softplus: return 1.0 / (1.0 + std::exp(-z));
    case Activation::exp: return std::exp(z);
    case Activation::identity: return 1.0;
  }
  return 1.0;
}

Mlp::Mlp(std::vector<int> layer_sizes, Activation hidden, Activation output)
    : sizes_(std::move(layer_sizes)), hidden_(hidden), output_(output) {
  if (sizes_.size() < 2) fail(ErrorCode::invalid_argument, "mlp needs at least two layer sizes");
  for (int s : sizes_) {
    if (s <= 0) fail(ErrorCode::invalid_argument, "mlp layer sizes must be positive");
  }
  layers_.resize(sizes_.size() - 1);
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    layers_[k].weight = Eigen::MatrixXd::Zero(sizes_[k + 1], sizes_[k]);
    layers_[k].bias = Eigen::VectorXd::Zero(sizes_[k + 1]);
  }
}

Mlp Mlp::glorot(std::vector<int> layer_sizes, Activation hidden, Activation output,
                std::uint64_t seed) {
  Mlp net(std::move(layer_sizes), hidden, output);
  Rng rng(seed);
  for (auto& layer : net.layers_) {
    const double limit = std::sqrt(6.0 / static_cast<double>(layer.weight.rows() + layer.weight.cols()));
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
        layer.weight(r, c) = rng.uniform(-limit, limit);
      }
    }
  }
  return net;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers_) n += layer.weight.size() + layer.bias.size();
  return n;
}

namespace {

template <typename Layers>
void flatten_layers(const Layers& layers, std::span<double> out) {
  std::size_t at = 0;
  for (const auto& layer : layers) {
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) out[at++] = layer.weight(r, c);
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) out[at++] = layer.bias(r);
  }
}

}  // namespace

void Mlp::copy_parameters_to(std::span<double> out) const {
  require_size("mlp parameter buffer", parameter_count(), out.size());
  flatten_layers(layers_, out);
}

void Mlp::set_parameters(std::span<const double> in) {
  require_size("mlp parameter buffer", parameter_count(), in.size());
  std::size_t at = 0;
  for (auto& layer : layers_) {
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = in[at++];
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias(r) = in[at++];
  }
}

std::vector<double> Mlp::parameters() const {
  std::vector<double> out(parameter_count());
  copy_parameters_to(out);
  return out;
}

void Mlp::validate() const {
  if (layers_.size() + 1 != sizes_.size()) fail(ErrorCode::malformed, "mlp layer count");
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const auto& layer = layers_[k];
    if (layer.weight.rows() != sizes_[k + 1] || layer.weight.cols() != sizes_[k] ||
        layer.bias.size() != sizes_[k + 1]) {
      fail(ErrorCode::dimension_mismatch, "mlp layer " + std::to_string(k) + " shape");
    }
    if (!layer.weight.allFinite() || !layer.bias.allFinite()) {
      fail(ErrorCode::non_finite, "mlp layer " + std::to_string(k) + " parameters");
    }
  }
}

GradBundle GradBundle::zeros_like(const Mlp& net) {
  GradBundle g;
  g.layers.resize(net.layer_count());
  for (std::size_t k = 0; k < net.layer_count(); ++k) {
    g.layers[k].weight = Eigen::MatrixXd::Zero(net.layers()[k].weight.rows(), net.layers()[k].weight.cols());
    g.layers[k].bias = Eigen::VectorXd::Zero(net.layers()[k].bias.size());
  }
  g.input = Eigen::VectorXd::Zero(net.input_size());
  return g;
}

void GradBundle::set_zero() {
  for (auto& layer : layers) {
    layer.weight.setZero();
    layer.bias.setZero();
  }
  input.setZero();
}

std::size_t GradBundle::parameter_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers) n += layer.weight.size() + layer.bias.size();
  return n;
}

void GradBundle::copy_parameters_to(std::span<double> out) const {
  require_size("gradient buffer", parameter_count(), out.size());
  flatten_layers(layers, out);
}

GradBundle& GradBundle::operator+=(const GradBundle& other) {
  for (std::size_t k = 0; k < layers.size(); ++k) {
    layers[k].weight += other.layers[k].weight;
    layers[k].bias += other.layers[k].bias;
  }
  input += other.input;
  return *this;
}

Eigen::VectorXd mlp_eval(const Mlp& net, std::span<const double> x) {
  require_size("mlp input", static_cast<std::size_t>(net.input_size()), x.size());
  Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  for (std::size_t k = 0; k < net.layer_count(); ++k) {
    const auto& layer = net.layers()[k];
    Eigen::VectorXd z = layer.weight * a + layer.bias;
    const Activation act = net.activation_for(k);
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = activate(act, z(i));
    a = std::move(z);
  }
  return a;
}

GradBundle mlp_backprop(const Mlp& net, std::span<const double> x,
                        std::span<const double> upstream) {
  require_size("mlp input", static_cast<std::size_t>(net.input_size()), x.size());
  require_size("mlp upstream", static_cast<std::size_t>(net.output_size()), upstream.size());
  const std::size_t n_layers = net.layer_count();
  std::vector<Eigen::VectorXd> inputs(n_layers);
  std::vector<Eigen::VectorXd> pre(n_layers);
  Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  for (std::size_t k = 0; k < n_layers; ++k) {
    inputs[k] = a;
    pre[k] = net.layers()[k].weight * a + net.layers()[k].bias;
    a = pre[k];
    const Activation act = net.activation_for(k);
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = activate(act, a(i));
  }

  GradBundle g = GradBundle::zeros_like(net);
  Eigen::VectorXd delta =
      Eigen::Map<const Eigen::VectorXd>(upstream.data(), static_cast<Eigen::Index>(upstream.size()));
  for (std::size_t k = n_layers; k-- > 0;) {
    const Activation act = net.activation_for(k);
    for (Eigen::Index i = 0; i < delta.size(); ++i) delta(i) *= activate_derivative(act, pre[k](i));
    g.layers[k].weight = delta * inputs[k].transpose();
    g.layers[k].bias = delta;
    delta = net.layers()[k].weight.transpose() * delta;
  }
  g.input = delta;
  return g;
}

}  // namespace trihead
