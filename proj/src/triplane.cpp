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

#include "trihead/triplane.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>

#include "trihead/core/error.hpp"
#include "trihead/core/rng.hpp"

namespace trihead {

namespace {

// Plane coordinate pairs in normalized space: xy -> (x, y), yz -> (y, z), xz -> (x, z).
constexpr std::array<std::array<int, 2>, 3> kPlaneAxes{{{0, 1}, {1, 2}, {0, 2}}};

template <typename T>
inline void cell_of(T u, std::uint32_t res, std::uint32_t& i0, T& frac) {
  const T s = u * static_cast<T>(res - 1);
  std::uint32_t i = static_cast<std::uint32_t>(s);
  if (i > res - 2) i = res - 2;
  i0 = i;
  frac = s - static_cast<T>(i);
}

}  // namespace

BilinearCorners bilinear_corners(const HashLevel& level, double u, double v) {
  u = std::clamp(u, 0.0, 1.0);
  v = std::clamp(v, 0.0, 1.0);
  const auto res = static_cast<std::uint32_t>(level.grid_resolution);
  std::uint32_t i0 = 0, j0 = 0;
  double a = 0.0, b = 0.0;
  cell_of(u, res, i0, a);
  cell_of(v, res, j0, b);
  BilinearCorners c;
  c.index = {hash_cell(level, i0, j0), hash_cell(level, i0 + 1, j0), hash_cell(level, i0, j0 + 1),
             hash_cell(level, i0 + 1, j0 + 1)};
  c.weight = {(1.0 - a) * (1.0 - b), a * (1.0 - b), (1.0 - a) * b, a * b};
  assert(std::abs(c.weight[0] + c.weight[1] + c.weight[2] + c.weight[3] - 1.0) < 1e-12);
  return c;
}

void plane_encode(const FeaturePlane& plane, double u, double v, std::span<double> out) {
  require_size("plane_encode output", static_cast<std::size_t>(plane.output_dim()), out.size());
  const int fd = plane.feature_dim_per_level;
  for (std::size_t l = 0; l < plane.levels.size(); ++l) {
    const HashLevel& level = plane.levels[l];
    const BilinearCorners c = bilinear_corners(level, u, v);
    for (int f = 0; f < fd; ++f) {
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += c.weight[k] * level.entries[c.index[k] * fd + f];
      out[l * fd + f] = acc;
    }
  }
}

std::vector<double> plane_encode(const FeaturePlane& plane, double u, double v) {
  std::vector<double> out(static_cast<std::size_t>(plane.output_dim()));
  plane_encode(plane, u, v, out);
  return out;
}

Vec3 BoundingBox::normalize(const Vec3& x, bool* clamped) const {
  Vec3 n;
  bool any = false;
  for (int a = 0; a < 3; ++a) {
    double t = (x[a] - lo[a]) / (hi[a] - lo[a]);
    if (t < 0.0 || t > 1.0) {
      any = true;
      t = std::clamp(t, 0.0, 1.0);
    }
    n[a] = t;
  }
  if (clamped != nullptr) *clamped = any;
  return n;
}

TriPlaneGrid TriPlaneGrid::create(const TriPlaneLayout& layout, const BoundingBox& box,
                                  std::uint64_t seed, double init_scale) {
  if (layout.resolutions.empty()) fail(ErrorCode::invalid_argument, "tri-plane needs at least one level");
  if (!std::has_single_bit(layout.max_table_size)) {
    fail(ErrorCode::invalid_argument, "table size must be a power of two");
  }
  for (std::size_t l = 0; l < layout.resolutions.size(); ++l) {
    if (layout.resolutions[l] < 2 || (l > 0 && layout.resolutions[l] <= layout.resolutions[l - 1])) {
      fail(ErrorCode::invalid_argument, "level resolutions must be >= 2 and strictly increasing");
    }
  }
  TriPlaneGrid grid;
  grid.box = box;
  Rng rng(seed);
  for (int p = 0; p < 3; ++p) {
    FeaturePlane& plane = grid.planes[p];
    plane.id = static_cast<PlaneId>(p);
    plane.feature_dim_per_level = layout.feature_dim_per_level;
    for (int res : layout.resolutions) {
      HashLevel level;
      level.grid_resolution = res;
      level.feature_dim = layout.feature_dim_per_level;
      const std::uint64_t cells = static_cast<std::uint64_t>(res) * static_cast<std::uint64_t>(res);
      level.table_size = static_cast<std::uint32_t>(
          std::min<std::uint64_t>(layout.max_table_size, std::bit_ceil(cells)));
      level.entries.resize(static_cast<std::size_t>(level.table_size) * level.feature_dim);
      for (double& e : level.entries) e = rng.uniform(-init_scale, init_scale);
      plane.levels.push_back(std::move(level));
    }
  }
  return grid;
}

TriPlaneLayout TriPlaneGrid::layout() const {
  TriPlaneLayout layout;
  layout.resolutions.clear();
  layout.feature_dim_per_level = planes[0].feature_dim_per_level;
  layout.max_table_size = 1;
  for (const auto& level : planes[0].levels) {
    layout.resolutions.push_back(level.grid_resolution);
    layout.max_table_size = std::max(layout.max_table_size, level.table_size);
  }
  return layout;
}

std::size_t TriPlaneGrid::parameter_count() const {
  std::size_t n = 0;
  for (const auto& plane : planes) {
    for (const auto& level : plane.levels) n += level.entries.size();
  }
  return n;
}

void TriPlaneGrid::copy_parameters_to(std::span<double> out) const {
  require_size("tri-plane parameter buffer", parameter_count(), out.size());
  std::size_t at = 0;
  for (const auto& plane : planes) {
    for (const auto& level : plane.levels) {
      std::copy(level.entries.begin(), level.entries.end(), out.begin() + static_cast<std::ptrdiff_t>(at));
      at += level.entries.size();
    }
  }
}

void TriPlaneGrid::set_parameters(std::span<const double> in) {
  require_size("tri-plane parameter buffer", parameter_count(), in.size());
  std::size_t at = 0;
  for (auto& plane : planes) {
    for (auto& level : plane.levels) {
      std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(at), level.entries.size(), level.entries.begin());
      at += level.entries.size();
    }
  }
}

void TriPlaneGrid::validate() const {
  const auto& ref = planes[0];
  for (const auto& plane : planes) {
    if (plane.levels.size() != ref.levels.size() || plane.feature_dim_per_level != ref.feature_dim_per_level) {
      fail(ErrorCode::dimension_mismatch, "tri-plane planes disagree on level structure");
    }
    for (std::size_t l = 0; l < plane.levels.size(); ++l) {
      const auto& level = plane.levels[l];
      if (level.grid_resolution != ref.levels[l].grid_resolution ||
          level.table_size != ref.levels[l].table_size) {
        fail(ErrorCode::dimension_mismatch, "tri-plane level " + std::to_string(l) + " layout differs across planes");
      }
      if (l > 0 && level.grid_resolution <= plane.levels[l - 1].grid_resolution) {
        fail(ErrorCode::malformed, "tri-plane resolutions must increase");
      }
      if (!std::has_single_bit(level.table_size)) fail(ErrorCode::malformed, "table size not a power of two");
      if (level.entries.size() != static_cast<std::size_t>(level.table_size) * level.feature_dim) {
        fail(ErrorCode::dimension_mismatch, "tri-plane table storage size");
      }
      for (double e : level.entries) {
        if (!std::isfinite(e)) fail(ErrorCode::non_finite, "tri-plane table entry");
      }
    }
  }
}

void triplane_encode(const TriPlaneGrid& grid, const Vec3& x, std::span<double> out,
                     ClampCounter* clamps) {
  require_size("triplane_encode output", static_cast<std::size_t>(grid.output_dim()), out.size());
  bool clamped = false;
  const Vec3 n = grid.box.normalize(x, &clamped);
  if (clamped && clamps != nullptr) clamps->bump();
  const auto d_h = static_cast<std::size_t>(grid.d_h());
  for (int p = 0; p < 3; ++p) {
    plane_encode(grid.planes[p], n[kPlaneAxes[p][0]], n[kPlaneAxes[p][1]], out.subspan(p * d_h, d_h));
  }
}

std::vector<double> triplane_encode(const TriPlaneGrid& grid, double x, double y, double z,
                                    ClampCounter* clamps) {
  std::vector<double> out(static_cast<std::size_t>(grid.output_dim()));
  triplane_encode(grid, Vec3(x, y, z), out, clamps);
  return out;
}

std::vector<SparseTableGrad> triplane_backprop(const TriPlaneGrid& grid, const Vec3& x,
                                               std::span<const double> upstream) {
  require_size("triplane upstream", static_cast<std::size_t>(grid.output_dim()), upstream.size());
  const Vec3 n = grid.box.normalize(x);
  const int d_h = grid.d_h();
  std::vector<SparseTableGrad> out;
  for (int p = 0; p < 3; ++p) {
    const FeaturePlane& plane = grid.planes[p];
    const int fd = plane.feature_dim_per_level;
    for (std::size_t l = 0; l < plane.levels.size(); ++l) {
      const BilinearCorners c = bilinear_corners(plane.levels[l], n[kPlaneAxes[p][0]], n[kPlaneAxes[p][1]]);
      for (int k = 0; k < 4; ++k) {
        if (c.weight[k] == 0.0) continue;
        for (int f = 0; f < fd; ++f) {
          out.push_back({plane.id, static_cast<int>(l), c.index[k], f,
                         c.weight[k] * upstream[p * d_h + static_cast<int>(l) * fd + f]});
        }
      }
    }
  }
  return out;
}

TriPlaneGradient TriPlaneGradient::zeros_like(const TriPlaneGrid& grid) {
  TriPlaneGradient g;
  for (int p = 0; p < 3; ++p) {
    for (const auto& level : grid.planes[p].levels) g.tables[p].emplace_back(level.entries.size(), 0.0);
  }
  return g;
}

void TriPlaneGradient::set_zero() {
  for (auto& plane : tables) {
    for (auto& t : plane) std::fill(t.begin(), t.end(), 0.0);
  }
}

TriPlaneGradient& TriPlaneGradient::operator+=(const TriPlaneGradient& other) {
  for (int p = 0; p < 3; ++p) {
    for (std::size_t l = 0; l < tables[p].size(); ++l) {
      auto& dst = tables[p][l];
      const auto& src = other.tables[p][l];
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
  }
  return *this;
}

void TriPlaneGradient::copy_parameters_to(std::span<double> out) const {
  std::size_t at = 0;
  for (const auto& plane : tables) {
    for (const auto& t : plane) {
      if (at + t.size() > out.size()) fail(ErrorCode::dimension_mismatch, "tri-plane gradient buffer");
      std::copy(t.begin(), t.end(), out.begin() + static_cast<std::ptrdiff_t>(at));
      at += t.size();
    }
  }
  require_size("tri-plane gradient buffer", at, out.size());
}

void triplane_backprop_accumulate(const TriPlaneGrid& grid, const Vec3& x,
                                  std::span<const double> upstream, TriPlaneGradient& grad) {
  for (const SparseTableGrad& g : triplane_backprop(grid, x, upstream)) {
    const int fd = grid.planes[static_cast<int>(g.plane)].feature_dim_per_level;
    grad.tables[static_cast<int>(g.plane)][g.level][g.index * fd + g.feature] += g.value;
  }
}

template <typename T>
TriPlaneKernel<T>::TriPlaneKernel(const TriPlaneGrid& grid)
    : fdim_(grid.planes[0].feature_dim_per_level), d_h_(grid.d_h()) {
  constexpr bool borrow = std::is_same_v<T, double>;
  if constexpr (!borrow) {
    storage_.reserve(grid.parameter_count());
    for (const auto& plane : grid.planes) {
      for (const auto& level : plane.levels) {
        for (double e : level.entries) storage_.push_back(static_cast<T>(e));
      }
    }
  }
  std::size_t at = 0;
  for (int p = 0; p < 3; ++p) {
    for (const auto& level : grid.planes[p].levels) {
      const T* data = nullptr;
      if constexpr (borrow) {
        data = level.entries.data();
      } else {
        data = storage_.data() + at;
      }
      at += level.entries.size();
      levels_[p].push_back({data, static_cast<std::uint32_t>(level.grid_resolution), level.table_size - 1u,
                            level.dense()});
    }
  }
}

template <typename T>
void TriPlaneKernel<T>::encode(const T* uvw, T* out) const {
  for (int p = 0; p < 3; ++p) {
    const T u = uvw[kPlaneAxes[p][0]];
    const T v = uvw[kPlaneAxes[p][1]];
    T* dst = out + p * d_h_;
    for (const Level& lv : levels_[p]) {
      std::uint32_t i0, j0;
      T a, b;
      cell_of(u, lv.res, i0, a);
      cell_of(v, lv.res, j0, b);
      std::uint32_t idx[4];
      if (lv.dense) {
        const std::uint32_t base = i0 + j0 * lv.res;
        idx[0] = base;
        idx[1] = base + 1;
        idx[2] = base + lv.res;
        idx[3] = base + lv.res + 1;
      } else {
        const std::uint32_t hj0 = j0 * kHashPrimeV;
        const std::uint32_t hj1 = (j0 + 1) * kHashPrimeV;
        idx[0] = (i0 ^ hj0) & lv.mask;
        idx[1] = ((i0 + 1) ^ hj0) & lv.mask;
        idx[2] = (i0 ^ hj1) & lv.mask;
        idx[3] = ((i0 + 1) ^ hj1) & lv.mask;
      }
      const T w[4] = {(T(1) - a) * (T(1) - b), a * (T(1) - b), (T(1) - a) * b, a * b};
      if (fdim_ == 2) {
        const T* r0 = lv.data + idx[0] * 2;
        const T* r1 = lv.data + idx[1] * 2;
        const T* r2 = lv.data + idx[2] * 2;
        const T* r3 = lv.data + idx[3] * 2;
        dst[0] = w[0] * r0[0] + w[1] * r1[0] + w[2] * r2[0] + w[3] * r3[0];
        dst[1] = w[0] * r0[1] + w[1] * r1[1] + w[2] * r2[1] + w[3] * r3[1];
        dst += 2;
        continue;
      }
      for (int f = 0; f < fdim_; ++f) {
        dst[f] = w[0] * lv.data[idx[0] * fdim_ + f] + w[1] * lv.data[idx[1] * fdim_ + f] +
                 w[2] * lv.data[idx[2] * fdim_ + f] + w[3] * lv.data[idx[3] * fdim_ + f];
      }
      dst += fdim_;
    }
  }
}

template <typename T>
void TriPlaneKernel<T>::encode_batch(const T* uvw, std::size_t n, T* out, std::size_t out_stride) const {
  if (fdim_ != 2) {
    for (std::size_t c = 0; c < n; ++c) encode(uvw + 3 * c, out + c * out_stride);
    return;
  }
  for (int p = 0; p < 3; ++p) {
    const int ax = kPlaneAxes[p][0];
    const int ay = kPlaneAxes[p][1];
    for (std::size_t l = 0; l < levels_[p].size(); ++l) {
      const Level lv = levels_[p][l];
      T* dst = out + p * d_h_ + 2 * l;
      for (std::size_t c = 0; c < n; ++c) {
        std::uint32_t i0, j0;
        T a, b;
        cell_of(uvw[3 * c + ax], lv.res, i0, a);
        cell_of(uvw[3 * c + ay], lv.res, j0, b);
        std::uint32_t idx[4];
        if (lv.dense) {
          const std::uint32_t base = i0 + j0 * lv.res;
          idx[0] = base;
          idx[1] = base + 1;
          idx[2] = base + lv.res;
          idx[3] = base + lv.res + 1;
        } else {
          const std::uint32_t hj0 = j0 * kHashPrimeV;
          const std::uint32_t hj1 = (j0 + 1) * kHashPrimeV;
          idx[0] = (i0 ^ hj0) & lv.mask;
          idx[1] = ((i0 + 1) ^ hj0) & lv.mask;
          idx[2] = (i0 ^ hj1) & lv.mask;
          idx[3] = ((i0 + 1) ^ hj1) & lv.mask;
        }
        const T w[4] = {(T(1) - a) * (T(1) - b), a * (T(1) - b), (T(1) - a) * b, a * b};
        const T* r0 = lv.data + idx[0] * 2;
        const T* r1 = lv.data + idx[1] * 2;
        const T* r2 = lv.data + idx[2] * 2;
        const T* r3 = lv.data + idx[3] * 2;
        T* o = dst + c * out_stride;
        o[0] = w[0] * r0[0] + w[1] * r1[0] + w[2] * r2[0] + w[3] * r3[0];
        o[1] = w[0] * r0[1] + w[1] * r1[1] + w[2] * r2[1] + w[3] * r3[1];
      }
    }
  }
}

template <typename T>
void TriPlaneKernel<T>::backward(const T* uvw, const T* upstream, TriPlaneGradient& grad) const {
  for (int p = 0; p < 3; ++p) {
    const T u = uvw[kPlaneAxes[p][0]];
    const T v = uvw[kPlaneAxes[p][1]];
    const T* up = upstream + p * d_h_;
    for (std::size_t l = 0; l < levels_[p].size(); ++l) {
      const Level& lv = levels_[p][l];
      std::uint32_t i0, j0;
      T a, b;
      cell_of(u, lv.res, i0, a);
      cell_of(v, lv.res, j0, b);
      std::uint32_t idx[4];
      if (lv.dense) {
        const std::uint32_t base = i0 + j0 * lv.res;
        idx[0] = base;
        idx[1] = base + 1;
        idx[2] = base + lv.res;
        idx[3] = base + lv.res + 1;
      } else {
        const std::uint32_t hj0 = j0 * kHashPrimeV;
        const std::uint32_t hj1 = (j0 + 1) * kHashPrimeV;
        idx[0] = (i0 ^ hj0) & lv.mask;
        idx[1] = ((i0 + 1) ^ hj0) & lv.mask;
        idx[2] = (i0 ^ hj1) & lv.mask;
        idx[3] = ((i0 + 1) ^ hj1) & lv.mask;
      }
      const T w[4] = {(T(1) - a) * (T(1) - b), a * (T(1) - b), (T(1) - a) * b, a * b};
      double* g = grad.tables[p][l].data();
      for (int k = 0; k < 4; ++k) {
        for (int f = 0; f < fdim_; ++f) {
          g[idx[k] * fdim_ + f] += static_cast<double>(w[k] * up[f]);
        }
      }
      up += fdim_;
    }
  }
}

template class TriPlaneKernel<float>;
template class TriPlaneKernel<double>;

}  // namespace trihead
