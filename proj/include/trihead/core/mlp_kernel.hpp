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

#include <vector>

#include "trihead/core/mlp.hpp"
#include "trihead/core/types.hpp"

namespace trihead {

/// Per-call buffers for batched evaluation. post[0] is the input, post[k+1] the
/// activated output of layer k, pre[k] its pre-activation. Reused across calls.
template <typename T>
struct MlpTape {
  std::vector<MatrixX<T>> pre;
  std::vector<MatrixX<T>> post;
  MatrixX<T> delta;
};

/// Ping-pong buffers for MlpKernel::infer.
template <typename T>
struct MlpScratch {
  MatrixX<T> buf[2];
};

/// Column-batched evaluator over a snapshot of an Mlp's parameters in precision T.
/// Each column of the input is one sample.
template <typename T>
class MlpKernel {
 public:
  MlpKernel() = default;
  explicit MlpKernel(const Mlp& net);

  int input_size() const { return input_size_; }
  int output_size() const { return output_size_; }

  /// Writes the batch output into tape.post.back() and returns a reference to it.
  const MatrixX<T>& forward(const Eigen::Ref<const MatrixX<T>>& x, MlpTape<T>& tape) const;

  /// Forward pass without recording; activations are applied in place and the input
  /// is read directly. The result lives in `scratch` until the next call.
  const MatrixX<T>& infer(const Eigen::Ref<const MatrixX<T>>& x, MlpScratch<T>& scratch) const;

  /// Backpropagates `dy` (output_size x n) through the batch recorded in `tape`.
  /// Parameter gradients are summed over columns into `grads`; `dx` receives the
  /// gradient with respect to the input when non-null.
  void backward(MlpTape<T>& tape, const MatrixX<T>& dy, GradBundle& grads, MatrixX<T>* dx) const;

 private:
  std::vector<MatrixX<T>> weight_;
  std::vector<VectorX<T>> bias_;
  std::vector<Activation> act_;
  int input_size_ = 0;
  int output_size_ = 0;
};

extern template class MlpKernel<float>;
extern template class MlpKernel<double>;

}  // namespace trihead
