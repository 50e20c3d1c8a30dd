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

#include "trihead/core/mlp_kernel.hpp"
#include "trihead/core/types.hpp"
#include "trihead/model.hpp"
#include "trihead/triplane.hpp"

namespace trihead {

/// Buffers for one batch of field queries. Columns are points; points are grouped by
/// ray, `points_per_ray` consecutive columns per ray.
template <typename T>
struct FieldTape {
  MatrixX<T> uvw;      // 3 x n, normalized positions in [0,1]^3
  MatrixX<T> trunk_in; // (3 d_h + d_a + 1) x n
  MatrixX<T> color_in; // (geo + 3) x n
  MatrixX<T> sigma;    // 1 x n
  MlpTape<T> gate_a, gate_b, trunk, color;
  MlpScratch<T> scratch_a, scratch_b, scratch_trunk, scratch_color;
  MatrixX<T> e_a;      // d_a x rays, normalized embedding per ray
  VectorX<T> blink;    // per ray, already clamped to [0,1]
  MatrixX<T> dirs;     // 3 x rays
  int points_per_ray = 1;
  bool record = true;  // false skips the MLP tapes; backward then is not available
  const MatrixX<T>* rgb_out = nullptr;

  Eigen::Index points() const { return uvw.cols(); }
  /// 3 x n colors from the last forward pass.
  const MatrixX<T>& rgb() const { return *rgb_out; }
};

/// Batched evaluation of tri-plane encoding, region-attention gates and the radiance
/// field over a snapshot of a Model, with reverse accumulation for training.
template <typename T>
class FieldBatch {
 public:
  explicit FieldBatch(const Model& model);

  int feature_dim() const { return feature_dim_; }
  int d_a() const { return d_a_; }

  /// Reads tape.uvw, e_a, blink, dirs and points_per_ray; fills the rest.
  void forward(FieldTape<T>& tape) const;

  /// d_sigma is 1 x n, d_rgb is 3 x n. Accumulates into `grad`.
  void backward(FieldTape<T>& tape, const MatrixX<T>& d_sigma, const MatrixX<T>& d_rgb,
                ModelGradient& grad) const;

 private:
  TriPlaneKernel<T> grid_;
  MlpKernel<T> gate_a_, gate_b_, trunk_, color_;
  int feature_dim_ = 0;
  int d_a_ = 0;
  int geo_ = 0;
};

extern template class FieldBatch<float>;
extern template class FieldBatch<double>;

}  // namespace trihead
