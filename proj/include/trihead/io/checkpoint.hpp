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
#include <optional>
#include <string>
#include <vector>

#include "trihead/model.hpp"

namespace trihead::io {

inline constexpr char kCheckpointMagic[4] = {'L', 'N', 'C', 'K'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Expected sizes when loading; any set field must match the file.
struct CheckpointExpectation {
  std::optional<int> d_h;
  std::optional<int> d_a;
  std::optional<int> landmarks;
};

/// Little-endian layout:
///   "LNCK", u32 version, u32 d_h, u32 d_a, u32 L,
///   u32 level count, per level u32 resolution and u32 table size, u32 features per level,
///   u32 network count (5: mlp_a, mlp_b, trunk, color, decoder), per network
///     u32 layer-size count, u32 sizes..., u8 hidden activation, u8 output activation,
///   u32 config JSON length, JSON bytes,
///   u64 parameter count, f64 parameters in Model's flat order,
///   u32 CRC-32 of every preceding byte.
std::vector<char> encode_checkpoint(const Model& model);
Model decode_checkpoint(const std::vector<char>& bytes, const CheckpointExpectation& expect = {},
                        const std::string& what = "checkpoint");

void save_checkpoint(const std::string& path, const Model& model);
Model load_checkpoint(const std::string& path, const CheckpointExpectation& expect = {});

}  // namespace trihead::io
