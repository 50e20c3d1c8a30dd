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

#include "trihead/core/mlp_kernel.hpp"

#include "trihead/core/error.hpp"

namespace trihead {

namespace {

template <typename T>
void apply_activation(Activation act, const MatrixX<T>& z, MatrixX<T>& out) {
  auto za = z.array();
  switch (act) {
    case Activation::relu: out = za.cwiseMax(T(0)).matrix(); break;
    case Activation::sigmoid: out = (T(1) / (T(1) + (-za).exp())).matrix(); break;
    case Activation::softplus: out = (za.cwiseMax(T(0)) + (-za.abs()).exp().log1p()).matrix(); break;
    case Activation::exp: out = za.exp().matrix(); break;
    case Activation::identity: out = z; break;
  }
}

template <typename T>
void activate_in_place(Activation act, MatrixX<T>& z) {
  auto za = z.array();
  switch (act) {
    case Activation::relu: za = za.cwiseMax(T(0)); break;
    case Activation::sigmoid: za = T(1) / (T(1) + (-za).exp()); break;
    case Activation::softplus: za = za.cwiseMax(T(0)) + (-za.abs()).exp().log1p(); break;
    case Activation::exp: za = za.exp(); break;
    case Activation::identity: break;
  }
}

// delta <- delta * act'(pre), using the stored activation where that is cheaper.
template <typename T>
void scale_by_derivative(Activation act, const MatrixX<T>& pre, const MatrixX<T>& post,
                         MatrixX<T>& delta) {
  auto d = delta.array();
  switch (act) {
    case Activation::relu: d = (pre.array() > T(0)).select(d, T(0)); break;
    case Activation::sigmoid: d *= post.array() * (T(1) - post.array()); break;
    case Activation::softplus: d *= T(1) / (T(1) + (-pre.array()).exp()); break;
    case Activation::exp: d *= post.array(); break;
    case Activation::identity: break;
  }
}

}  // namespace

template <typename T>
MlpKernel<T>::MlpKernel(const Mlp& net)
    : input_size_(net.input_size()), output_size_(net.output_size()) {
  for (std::size_t k = 0; k < net.layer_count(); ++k) {
    weight_.push_back(net.layers()[k].weight.template cast<T>());
    bias_.push_back(net.layers()[k].bias.template cast<T>());
    act_.push_back(net.activation_for(k));
  }
}

template <typename T>
const MatrixX<T>& MlpKernel<T>::forward(const Eigen::Ref<const MatrixX<T>>& x,
                                        MlpTape<T>& tape) const {
  if (x.rows() != input_size_) require_size("mlp batch input rows", input_size_, x.rows());
  const std::size_t n_layers = weight_.size();
  tape.pre.resize(n_layers);
  tape.post.resize(n_layers + 1);
  tape.post[0] = x;
  for (std::size_t k = 0; k < n_layers; ++k) {
    tape.pre[k].noalias() = weight_[k] * tape.post[k];
    tape.pre[k].colwise() += bias_[k];
    apply_activation(act_[k], tape.pre[k], tape.post[k + 1]);
  }
  return tape.post.back();
}

template <typename T>
const MatrixX<T>& MlpKernel<T>::infer(const Eigen::Ref<const MatrixX<T>>& x,
                                      MlpScratch<T>& scratch) const {
  if (x.rows() != input_size_) require_size("mlp batch input rows", input_size_, x.rows());
  const std::size_t n_layers = weight_.size();
  for (std::size_t k = 0; k < n_layers; ++k) {
    MatrixX<T>& y = scratch.buf[k % 2];
    if (k == 0) {
      y.noalias() = weight_[k] * x;
    } else {
      y.noalias() = weight_[k] * scratch.buf[(k - 1) % 2];
    }
    y.colwise() += bias_[k];
    activate_in_place(act_[k], y);
  }
  return scratch.buf[(n_layers - 1) % 2];
}

template <typename T>
void MlpKernel<T>::backward(MlpTape<T>& tape, const MatrixX<T>& dy, GradBundle& grads,
                            MatrixX<T>* dx) const {
  const std::size_t n_layers = weight_.size();
  if (dy.rows() != output_size_) require_size("mlp batch upstream rows", output_size_, dy.rows());
  tape.delta = dy;
  for (std::size_t k = n_layers; k-- > 0;) {
    scale_by_derivative(act_[k], tape.pre[k], tape.post[k + 1], tape.delta);
    grads.layers[k].weight += (tape.delta * tape.post[k].transpose()).template cast<double>();
    grads.layers[k].bias += tape.delta.rowwise().sum().template cast<double>();
    if (k > 0 || dx != nullptr) {
      MatrixX<T> next = weight_[k].transpose() * tape.delta;
      tape.delta = std::move(next);
    }
  }
  if (dx != nullptr) *dx = tape.delta;
}

template class MlpKernel<float>;
template class MlpKernel<double>;

}  // namespace trihead
