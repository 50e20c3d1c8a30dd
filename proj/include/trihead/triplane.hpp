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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "trihead/core/types.hpp"

namespace trihead {

enum class PlaneId { xy = 0, yz = 1, xz = 2 };

inline constexpr std::uint32_t kHashPrimeU = 1u;
inline constexpr std::uint32_t kHashPrimeV = 2654435761u;

/// One resolution level of a 2D feature plane. `grid_resolution` counts vertices per
/// axis; a query at u in [0, 1] lands between vertices floor(u * (res - 1)) and the next.
struct HashLevel {
  int grid_resolution = 2;
  std::uint32_t table_size = 4;  // power of two
  int feature_dim = 2;
  std::vector<double> entries;  // table_size x feature_dim, row-major

  bool dense() const {
    return static_cast<std::uint64_t>(grid_resolution) * static_cast<std::uint64_t>(grid_resolution) <=
           table_size;
  }
};

/// Table slot of vertex (i, j). Direct addressing i + j * res when the level fits in
/// its table, otherwise (i * 1 XOR j * 2654435761) mod table_size in 32-bit arithmetic.
inline std::uint32_t hash_cell(const HashLevel& level, std::uint32_t i, std::uint32_t j) {
  if (level.dense()) return i + j * static_cast<std::uint32_t>(level.grid_resolution);
  return ((i * kHashPrimeU) ^ (j * kHashPrimeV)) & (level.table_size - 1u);
}

struct FeaturePlane {
  PlaneId id = PlaneId::xy;
  int feature_dim_per_level = 2;
  std::vector<HashLevel> levels;  // coarse to fine

  int output_dim() const { return feature_dim_per_level * static_cast<int>(levels.size()); }
};

struct BilinearCorners {
  std::array<std::uint32_t, 4> index{};
  std::array<double, 4> weight{};  // (1-a)(1-b), a(1-b), (1-a)b, ab
};

BilinearCorners bilinear_corners(const HashLevel& level, double u, double v);

/// Concatenation over levels of the bilinearly interpolated table rows.
void plane_encode(const FeaturePlane& plane, double u, double v, std::span<double> out);
std::vector<double> plane_encode(const FeaturePlane& plane, double u, double v);

struct BoundingBox {
  Vec3 lo{-1.0, -1.0, -1.0};
  Vec3 hi{1.0, 1.0, 1.0};

  /// Maps the box onto [0,1]^3. Points outside are clamped and reported.
  Vec3 normalize(const Vec3& x, bool* clamped = nullptr) const;
};

struct TriPlaneLayout {
  std::vector<int> resolutions{16, 32, 64, 128};
  int feature_dim_per_level = 2;
  std::uint32_t max_table_size = 1u << 14;

  int d_h() const { return feature_dim_per_level * static_cast<int>(resolutions.size()); }
};

/// Three orthogonal multiresolution feature planes: H_xy, H_yz, H_xz.
class TriPlaneGrid {
 public:
  TriPlaneGrid() = default;

  /// Entries uniform in +-init_scale.
  static TriPlaneGrid create(const TriPlaneLayout& layout, const BoundingBox& box,
                             std::uint64_t seed, double init_scale = 1e-4);

  std::array<FeaturePlane, 3> planes;  // xy, yz, xz
  BoundingBox box;

  FeaturePlane& plane(PlaneId id) { return planes[static_cast<int>(id)]; }
  const FeaturePlane& plane(PlaneId id) const { return planes[static_cast<int>(id)]; }

  int d_h() const { return planes[0].output_dim(); }
  int output_dim() const { return 3 * d_h(); }
  TriPlaneLayout layout() const;

  /// Flat enumeration: planes xy, yz, xz; levels coarse to fine; entries row-major.
  std::size_t parameter_count() const;
  void copy_parameters_to(std::span<double> out) const;
  void set_parameters(std::span<const double> in);

  void validate() const;
};

/// f_x = H_xy(x, y) (+) H_yz(y, z) (+) H_xz(x, z), length 3 * d_h.
void triplane_encode(const TriPlaneGrid& grid, const Vec3& x, std::span<double> out,
                     ClampCounter* clamps = nullptr);
std::vector<double> triplane_encode(const TriPlaneGrid& grid, double x, double y, double z,
                                    ClampCounter* clamps = nullptr);

/// One touched table entry and the gradient it receives.
struct SparseTableGrad {
  PlaneId plane;
  int level;
  std::uint32_t index;
  int feature;
  double value;
};

std::vector<SparseTableGrad> triplane_backprop(const TriPlaneGrid& grid, const Vec3& x,
                                               std::span<const double> upstream);

/// Dense gradient buffers laid out exactly like the grid's tables.
struct TriPlaneGradient {
  std::array<std::vector<std::vector<double>>, 3> tables;

  static TriPlaneGradient zeros_like(const TriPlaneGrid& grid);
  void set_zero();
  TriPlaneGradient& operator+=(const TriPlaneGradient& other);
  void copy_parameters_to(std::span<double> out) const;
};

void triplane_backprop_accumulate(const TriPlaneGrid& grid, const Vec3& x,
                                  std::span<const double> upstream, TriPlaneGradient& grad);

/// Flat per-point evaluator used by the batched render and training paths. For
/// T = double it can borrow the grid's tables; otherwise it owns a converted copy.
template <typename T>
class TriPlaneKernel {
 public:
  TriPlaneKernel() = default;
  explicit TriPlaneKernel(const TriPlaneGrid& grid);

  int d_h() const { return d_h_; }

  /// `uvw` is a normalized point in [0,1]^3; writes 3 * d_h values to out.
  void encode(const T* uvw, T* out) const;

  /// encode() for n points stored as consecutive triples; point c writes to
  /// out + c * out_stride. Results match encode() exactly.
  void encode_batch(const T* uvw, std::size_t n, T* out, std::size_t out_stride) const;

  /// Scatters `upstream` (3 * d_h values) into `grad` with bilinear weights.
  void backward(const T* uvw, const T* upstream, TriPlaneGradient& grad) const;

 private:
  struct Level {
    const T* data;
    std::uint32_t res;
    std::uint32_t mask;
    bool dense;
  };
  std::vector<T> storage_;
  std::array<std::vector<Level>, 3> levels_;
  int fdim_ = 2;
  int d_h_ = 0;
};

extern template class TriPlaneKernel<float>;
extern template class TriPlaneKernel<double>;

}  // namespace trihead
