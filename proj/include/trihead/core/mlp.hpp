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

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trihead {

enum class Activation { relu, sigmoid, softplus, exp, identity };

std::string_view activation_name(Activation act);
Activation parse_activation(std::string_view name);

double activate(Activation act, double z);
/// Derivative of the activation with respect to its pre-activation `z`.
double activate_derivative(Activation act, double z);

struct MlpLayer {
  Eigen::MatrixXd weight;  // size_out x size_in
  Eigen::VectorXd bias;
};

/// Small fully connected network. One activation is shared by all hidden layers and
/// another is applied to the output layer.
class Mlp {
 public:
  Mlp() = default;
  /// All parameters zero.
  Mlp(std::vector<int> layer_sizes, Activation hidden, Activation output);

  /// Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero.
  static Mlp glorot(std::vector<int> layer_sizes, Activation hidden, Activation output,
                    std::uint64_t seed);

  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  std::size_t layer_count() const { return layers_.size(); }
  const std::vector<int>& layer_sizes() const { return sizes_; }
  Activation hidden_activation() const { return hidden_; }
  Activation output_activation() const { return output_; }
  Activation activation_for(std::size_t layer) const {
    return layer + 1 == layers_.size() ? output_ : hidden_;
  }

  std::vector<MlpLayer>& layers() { return layers_; }
  const std::vector<MlpLayer>& layers() const { return layers_; }

  /// Flat enumeration: for each layer, the weight matrix row-major, then the bias.
  std::size_t parameter_count() const;
  void copy_parameters_to(std::span<double> out) const;
  void set_parameters(std::span<const double> in);
  std::vector<double> parameters() const;

  /// Throws if layer shapes disagree or a parameter is not finite.
  void validate() const;

 private:
  std::vector<int> sizes_{1, 1};
  Activation hidden_ = Activation::relu;
  Activation output_ = Activation::identity;
  std::vector<MlpLayer> layers_;
};

/// Gradients shaped like an Mlp plus the gradient with respect to the input.
struct GradBundle {
  std::vector<MlpLayer> layers;
  Eigen::VectorXd input;

  static GradBundle zeros_like(const Mlp& net);
  void set_zero();
  std::size_t parameter_count() const;
  void copy_parameters_to(std::span<double> out) const;
  GradBundle& operator+=(const GradBundle& other);
};

Eigen::VectorXd mlp_eval(const Mlp& net, std::span<const double> x);

/// Reverse accumulation of d(upstream . mlp_eval(net, x)).
GradBundle mlp_backprop(const Mlp& net, std::span<const double> x,
                        std::span<const double> upstream);

}  // namespace trihead
