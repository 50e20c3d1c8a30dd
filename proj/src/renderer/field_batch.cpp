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

#include "trihead/renderer/field_batch.hpp"

#include <type_traits>

#include "trihead/core/error.hpp"

namespace trihead {

template <typename T>
FieldBatch<T>::FieldBatch(const Model& model)
    : grid_(model.grid),
      gate_a_(model.gates.mlp_a),
      gate_b_(model.gates.mlp_b),
      trunk_(model.field.trunk),
      color_(model.field.color),
      feature_dim_(model.grid.output_dim()),
      d_a_(model.config.d_a),
      geo_(model.field.geo_features()) {}

template <typename T>
void FieldBatch<T>::forward(FieldTape<T>& tape) const {
  const Eigen::Index n = tape.uvw.cols();
  const int ppr = tape.points_per_ray;
  if (ppr <= 0 || n % ppr != 0) fail(ErrorCode::dimension_mismatch, "field batch point grouping");
  const Eigen::Index rays = n / ppr;
  if (tape.e_a.rows() != d_a_ || tape.e_a.cols() != rays || tape.blink.size() != rays ||
      tape.dirs.cols() != rays) {
    fail(ErrorCode::dimension_mismatch, "field batch conditioning shapes");
  }
  const int fd = feature_dim_;
  tape.trunk_in.resize(fd + d_a_ + 1, n);
  grid_.encode_batch(tape.uvw.data(), static_cast<std::size_t>(n), tape.trunk_in.data(),
                     static_cast<std::size_t>(tape.trunk_in.rows()));

  const auto features = tape.trunk_in.topRows(fd);
  const bool rec = tape.record;
  const MatrixX<T>& va = rec ? gate_a_.forward(features, tape.gate_a) : gate_a_.infer(features, tape.scratch_a);
  const MatrixX<T>& vb = rec ? gate_b_.forward(features, tape.gate_b) : gate_b_.infer(features, tape.scratch_b);
  for (Eigen::Index r = 0; r < rays; ++r) {
    const Eigen::Index c0 = r * ppr;
    tape.trunk_in.block(fd, c0, d_a_, ppr).array() =
        va.middleCols(c0, ppr).array().colwise() * tape.e_a.col(r).array();
    tape.trunk_in.row(fd + d_a_).segment(c0, ppr) = vb.row(0).segment(c0, ppr) * tape.blink[r];
  }

  const MatrixX<T>& out =
      rec ? trunk_.forward(tape.trunk_in, tape.trunk) : trunk_.infer(tape.trunk_in, tape.scratch_trunk);
  const auto pre_sigma = out.row(0).array();
  if constexpr (std::is_same_v<T, float>) {
    // Eigen has no packet log1p; log(1 + y) loses at most one float ulp of sigma here.
    tape.sigma = (pre_sigma.cwiseMax(T(0)) + ((-pre_sigma.abs()).exp() + T(1)).log()).matrix();
  } else {
    tape.sigma = (pre_sigma.cwiseMax(T(0)) + (-pre_sigma.abs()).exp().log1p()).matrix();
  }
  tape.color_in.resize(geo_ + 3, n);
  tape.color_in.topRows(geo_) = out.bottomRows(geo_);
  for (Eigen::Index r = 0; r < rays; ++r) {
    tape.color_in.block(geo_, r * ppr, 3, ppr).colwise() = tape.dirs.col(r);
  }
  tape.rgb_out = rec ? &color_.forward(tape.color_in, tape.color) : &color_.infer(tape.color_in, tape.scratch_color);
}

template <typename T>
void FieldBatch<T>::backward(FieldTape<T>& tape, const MatrixX<T>& d_sigma, const MatrixX<T>& d_rgb,
                             ModelGradient& grad) const {
  const Eigen::Index n = tape.uvw.cols();
  const int ppr = tape.points_per_ray;
  const int fd = feature_dim_;
  if (!tape.record) fail(ErrorCode::invalid_argument, "field batch backward needs a recorded forward pass");
  if (d_sigma.cols() != n || d_rgb.cols() != n) fail(ErrorCode::dimension_mismatch, "field batch upstream");

  MatrixX<T> d_color_in;
  color_.backward(tape.color, d_rgb, grad.color, &d_color_in);

  const MatrixX<T>& out = tape.trunk.post.back();
  MatrixX<T> d_out(geo_ + 1, n);
  d_out.row(0) = d_sigma.array() / (T(1) + (-out.row(0).array()).exp());
  d_out.bottomRows(geo_) = d_color_in.topRows(geo_);
  MatrixX<T> d_in;
  trunk_.backward(tape.trunk, d_out, grad.trunk, &d_in);

  MatrixX<T> d_features = d_in.topRows(fd);
  MatrixX<T> d_va(d_a_, n);
  MatrixX<T> d_vb(1, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const Eigen::Index r = c / ppr;
    d_va.col(c) = d_in.col(c).segment(fd, d_a_).cwiseProduct(tape.e_a.col(r));
    d_vb(0, c) = d_in(fd + d_a_, c) * tape.blink[r];
  }
  MatrixX<T> d_gate;
  gate_a_.backward(tape.gate_a, d_va, grad.mlp_a, &d_gate);
  d_features += d_gate;
  gate_b_.backward(tape.gate_b, d_vb, grad.mlp_b, &d_gate);
  d_features += d_gate;

  for (Eigen::Index c = 0; c < n; ++c) grid_.backward(tape.uvw.col(c).data(), d_features.col(c).data(), grad.grid);
}

template class FieldBatch<float>;
template class FieldBatch<double>;

}  // namespace trihead
