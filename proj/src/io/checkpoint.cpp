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

#include "trihead/io/checkpoint.hpp"

#include <zlib.h>

#include "trihead/core/error.hpp"
#include "trihead/io/binary.hpp"
#include "trihead/io/run_config.hpp"

namespace trihead::io {

namespace {

std::uint32_t crc_of(const char* data, std::size_t size) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks for very large payloads.
  while (size > 0) {
    const uInt n = static_cast<uInt>(std::min<std::size_t>(size, 1u << 30));
    crc = crc32(crc, reinterpret_cast<const Bytef*>(data), n);
    data += n;
    size -= n;
  }
  return static_cast<std::uint32_t>(crc);
}

std::vector<const Mlp*> networks(const Model& m) {
  return {&m.gates.mlp_a, &m.gates.mlp_b, &m.field.trunk, &m.field.color, &m.decoder};
}

void check_dim(const char* name, std::optional<int> expected, std::uint32_t actual) {
  if (expected && static_cast<std::uint32_t>(*expected) != actual) {
    fail(ErrorCode::dimension_mismatch, std::string(name) + ": checkpoint has " + std::to_string(actual) +
                                            ", config expects " + std::to_string(*expected));
  }
}

}  // namespace

std::vector<char> encode_checkpoint(const Model& model) {
  model.validate();
  ByteWriter w;
  w.bytes(std::string_view(kCheckpointMagic, 4));
  w.u32(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(model.d_h()));
  w.u32(static_cast<std::uint32_t>(model.d_a()));
  w.u32(static_cast<std::uint32_t>(model.config.landmarks));
  const auto& levels = model.grid.planes[0].levels;
  w.u32(static_cast<std::uint32_t>(levels.size()));
  for (const HashLevel& l : levels) {
    w.u32(l.grid_resolution);
    w.u32(l.table_size);
  }
  w.u32(static_cast<std::uint32_t>(model.grid.planes[0].feature_dim_per_level));
  const auto nets = networks(model);
  w.u32(static_cast<std::uint32_t>(nets.size()));
  for (const Mlp* n : nets) {
    w.u32(static_cast<std::uint32_t>(n->layer_sizes().size()));
    for (int s : n->layer_sizes()) w.u32(static_cast<std::uint32_t>(s));
    w.u8(static_cast<std::uint8_t>(n->hidden_activation()));
    w.u8(static_cast<std::uint8_t>(n->output_activation()));
  }
  const std::string config = to_json(model.config).dump();
  w.u32(static_cast<std::uint32_t>(config.size()));
  w.bytes(config);
  const std::vector<double> params = model.parameters();
  w.u64(params.size());
  for (double p : params) w.f64(p);
  w.u32(crc_of(w.data().data(), w.data().size()));
  return std::move(w.data());
}

Model decode_checkpoint(const std::vector<char>& bytes, const CheckpointExpectation& expect, const std::string& what) {
  if (bytes.size() < 4 || std::string_view(bytes.data(), 4) != std::string_view(kCheckpointMagic, 4)) {
    fail(ErrorCode::bad_magic, what + ": not a checkpoint");
  }
  ByteReader r(bytes.data(), bytes.size(), what);
  r.bytes(4);
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    fail(ErrorCode::unsupported_version, what + ": version " + std::to_string(version) + ", this build reads " +
                                             std::to_string(kCheckpointVersion));
  }
  if (bytes.size() < 8 + 4) fail(ErrorCode::truncated_payload, what);
  const std::size_t body = bytes.size() - 4;
  ByteReader trailer(bytes.data() + body, 4, what);
  if (crc_of(bytes.data(), body) != trailer.u32()) fail(ErrorCode::checksum_mismatch, what + ": CRC-32 mismatch");

  ByteReader h(bytes.data(), body, what);
  h.bytes(8);
  const std::uint32_t d_h = h.u32();
  const std::uint32_t d_a = h.u32();
  const std::uint32_t landmarks = h.u32();
  check_dim("d_h", expect.d_h, d_h);
  check_dim("d_a", expect.d_a, d_a);
  check_dim("L", expect.landmarks, landmarks);
  const std::uint32_t level_count = h.u32();
  if (level_count == 0 || level_count > 64) fail(ErrorCode::malformed, what + ": level count");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> levels(level_count);
  for (auto& l : levels) {
    l.first = h.u32();
    l.second = h.u32();
  }
  const std::uint32_t fdim = h.u32();
  const std::uint32_t net_count = h.u32();
  if (net_count != 5) fail(ErrorCode::malformed, what + ": expected 5 networks");
  std::vector<std::vector<int>> net_sizes(net_count);
  std::vector<std::pair<int, int>> net_acts(net_count);
  for (std::uint32_t k = 0; k < net_count; ++k) {
    const std::uint32_t n = h.u32();
    if (n < 2 || n > 64) fail(ErrorCode::malformed, what + ": network layer count");
    for (std::uint32_t i = 0; i < n; ++i) net_sizes[k].push_back(static_cast<int>(h.u32()));
    net_acts[k] = {h.u8(), h.u8()};
  }
  const std::uint32_t config_len = h.u32();
  const std::string config_text = h.bytes(config_len);
  ModelConfig config;
  try {
    config = model_config_from_json(nlohmann::json::parse(config_text));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::malformed, what + ": config JSON: " + e.what());
  }

  Model model = Model::create(config);
  if (static_cast<std::uint32_t>(model.d_h()) != d_h || static_cast<std::uint32_t>(model.d_a()) != d_a ||
      static_cast<std::uint32_t>(config.landmarks) != landmarks) {
    fail(ErrorCode::dimension_mismatch, what + ": header sizes disagree with the stored config");
  }
  const auto& built = model.grid.planes[0].levels;
  if (built.size() != level_count || static_cast<std::uint32_t>(model.grid.planes[0].feature_dim_per_level) != fdim) {
    fail(ErrorCode::dimension_mismatch, what + ": level layout disagrees with the stored config");
  }
  for (std::size_t i = 0; i < built.size(); ++i) {
    if (static_cast<std::uint32_t>(built[i].grid_resolution) != levels[i].first || built[i].table_size != levels[i].second) {
      fail(ErrorCode::dimension_mismatch, what + ": level " + std::to_string(i) + " layout");
    }
  }
  const auto nets = networks(model);
  for (std::size_t k = 0; k < nets.size(); ++k) {
    if (nets[k]->layer_sizes() != net_sizes[k] || static_cast<int>(nets[k]->hidden_activation()) != net_acts[k].first ||
        static_cast<int>(nets[k]->output_activation()) != net_acts[k].second) {
      fail(ErrorCode::dimension_mismatch, what + ": network " + std::to_string(k) + " layout");
    }
  }
  const std::uint64_t count = h.u64();
  if (count != model.parameter_count()) {
    fail(ErrorCode::dimension_mismatch, what + ": " + std::to_string(count) + " parameters, layout needs " +
                                            std::to_string(model.parameter_count()));
  }
  if (h.remaining() != count * 8) fail(ErrorCode::truncated_payload, what + ": payload size");
  std::vector<double> params(count);
  for (double& p : params) p = h.f64();
  model.set_parameters(params);
  model.validate();
  return model;
}

void save_checkpoint(const std::string& path, const Model& model) { write_file(path, encode_checkpoint(model)); }

Model load_checkpoint(const std::string& path, const CheckpointExpectation& expect) {
  return decode_checkpoint(read_file(path), expect, path);
}

}  // namespace trihead::io
