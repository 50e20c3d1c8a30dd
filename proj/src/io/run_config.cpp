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

#include "trihead/io/run_config.hpp"

#include <filesystem>
#include <set>

#include "trihead/core/error.hpp"
#include "trihead/io/binary.hpp"

namespace trihead::io {

using nlohmann::json;

RunMode parse_run_mode(const std::string& name) {
  if (name == "train") return RunMode::train;
  if (name == "render") return RunMode::render;
  if (name == "bench") return RunMode::bench;
  if (name == "selftest") return RunMode::selftest;
  fail(ErrorCode::usage, "unknown mode '" + name + "'");
}

std::string run_mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::train: return "train";
    case RunMode::render: return "render";
    case RunMode::bench: return "bench";
    case RunMode::selftest: return "selftest";
  }
  return "render";
}

Preset preset_by_name(const std::string& name) {
  Preset p;
  p.name = name;
  if (name == "desk") return p;
  if (name == "fast") {
    p.width = p.height = 64;
    p.points = 16;
    return p;
  }
  if (name == "paper") {
    p.width = p.height = 512;
    p.points = 64;
    return p;
  }
  fail(ErrorCode::usage, "unknown preset '" + name + "' (desk, fast, paper)");
}

void RunConfig::validate_paths() const {
  namespace fs = std::filesystem;
  for (const std::string* p : {&checkpoint, &audio, &features, &reference, &keypoints, &blink}) {
    if (!p->empty() && !fs::exists(*p)) fail(ErrorCode::missing_file, *p);
  }
  if (!out.empty()) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out)) fail(ErrorCode::unwritable_path, out);
  }
}

json to_json(const RunConfig& c) {
  json j{{"mode", run_mode_name(c.mode)}, {"preset", c.preset}, {"seed", c.seed}, {"checkpoint", c.checkpoint},
         {"audio", c.audio}, {"features", c.features}, {"ref", c.reference}, {"keypoints", c.keypoints},
         {"blink", c.blink}, {"out", c.out}, {"threads", c.threads}};
  auto opt = [&j](const char* key, const auto& v) {
    if (v) j[key] = *v;
  };
  opt("width", c.width);
  opt("height", c.height);
  opt("points", c.points);
  opt("fps", c.fps);
  opt("frames", c.frames);
  opt("d_a", c.d_a);
  opt("landmarks", c.landmarks);
  opt("iterations", c.iterations);
  return j;
}

namespace {

template <typename T>
void take(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

template <typename T>
void take(const json& j, const char* key, std::optional<T>& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

void reject_unknown(const json& j, const std::set<std::string>& known, const char* what) {
  if (!j.is_object()) fail(ErrorCode::malformed, std::string(what) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) fail(ErrorCode::invalid_argument, std::string(what) + ": unknown key '" + key + "'");
  }
}

json vec3(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from(const json& j) {
  if (!j.is_array() || j.size() != 3) fail(ErrorCode::malformed, "expected a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

void merge_json(const json& j, RunConfig& c) {
  reject_unknown(j,
                 {"mode", "preset", "seed", "checkpoint", "audio", "features", "ref", "keypoints", "blink", "out",
                  "threads", "width", "height", "points", "fps", "frames", "d_a", "landmarks", "iterations"},
                 "run config");
  try {
    if (j.contains("mode")) c.mode = parse_run_mode(j.at("mode").get<std::string>());
    take(j, "preset", c.preset);
    take(j, "seed", c.seed);
    take(j, "checkpoint", c.checkpoint);
    take(j, "audio", c.audio);
    take(j, "features", c.features);
    take(j, "ref", c.reference);
    take(j, "keypoints", c.keypoints);
    take(j, "blink", c.blink);
    take(j, "out", c.out);
    take(j, "threads", c.threads);
    take(j, "width", c.width);
    take(j, "height", c.height);
    take(j, "points", c.points);
    take(j, "fps", c.fps);
    take(j, "frames", c.frames);
    take(j, "d_a", c.d_a);
    take(j, "landmarks", c.landmarks);
    take(j, "iterations", c.iterations);
  } catch (const json::exception& e) {
    fail(ErrorCode::malformed, std::string("run config: ") + e.what());
  }
}

RunConfig load_run_config(const std::string& path) {
  const std::vector<char> bytes = read_file(path);
  json j;
  try {
    j = json::parse(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    fail(ErrorCode::malformed, path + ": " + e.what());
  }
  RunConfig c;
  merge_json(j, c);
  return c;
}

json to_json(const ModelConfig& c) {
  return json{{"resolutions", c.layout.resolutions},
              {"feature_dim_per_level", c.layout.feature_dim_per_level},
              {"max_table_size", c.layout.max_table_size},
              {"box_lo", vec3(c.box.lo)},
              {"box_hi", vec3(c.box.hi)},
              {"d_a", c.d_a},
              {"landmarks", c.landmarks},
              {"gate_hidden", c.gate_hidden},
              {"trunk_hidden", c.trunk_hidden},
              {"geo_features", c.geo_features},
              {"color_hidden", c.color_hidden},
              {"decoder_hidden", c.decoder_hidden},
              {"background", vec3(c.background)},
              {"seed", c.seed}};
}

ModelConfig model_config_from_json(const json& j) {
  reject_unknown(j,
                 {"resolutions", "feature_dim_per_level", "max_table_size", "box_lo", "box_hi", "d_a", "landmarks",
                  "gate_hidden", "trunk_hidden", "geo_features", "color_hidden", "decoder_hidden", "background",
                  "seed"},
                 "model config");
  ModelConfig c;
  try {
    take(j, "resolutions", c.layout.resolutions);
    take(j, "feature_dim_per_level", c.layout.feature_dim_per_level);
    take(j, "max_table_size", c.layout.max_table_size);
    if (j.contains("box_lo")) c.box.lo = vec3_from(j.at("box_lo"));
    if (j.contains("box_hi")) c.box.hi = vec3_from(j.at("box_hi"));
    take(j, "d_a", c.d_a);
    take(j, "landmarks", c.landmarks);
    take(j, "gate_hidden", c.gate_hidden);
    take(j, "trunk_hidden", c.trunk_hidden);
    take(j, "geo_features", c.geo_features);
    take(j, "color_hidden", c.color_hidden);
    take(j, "decoder_hidden", c.decoder_hidden);
    if (j.contains("background")) c.background = vec3_from(j.at("background"));
    take(j, "seed", c.seed);
  } catch (const json::exception& e) {
    fail(ErrorCode::malformed, std::string("model config: ") + e.what());
  }
  c.validate();
  return c;
}

json to_json(const TrainConfig& c) {
  return json{{"width", c.width},
              {"height", c.height},
              {"points", c.points},
              {"iterations", c.iterations},
              {"rays_per_batch", c.rays_per_batch},
              {"lr_tables", c.lr_tables},
              {"lr_networks", c.lr_networks},
              {"beta1", c.beta1},
              {"beta2", c.beta2},
              {"lr_final_fraction", c.lr_final_fraction},
              {"seed", c.seed},
              {"fps", c.fps},
              {"sample_rate", c.sample_rate},
              {"audio_seconds", c.audio_seconds},
              {"train_views", c.train_views},
              {"heldout_views", c.heldout_views},
              {"gt_points", c.gt_points},
              {"orbit_degrees", c.orbit_degrees},
              {"camera_distance", c.camera_distance},
              {"focal_factor", c.focal_factor},
              {"log_every", c.log_every},
              {"divergence_factor", c.divergence_factor},
              {"divergence_patience", c.divergence_patience},
              {"model", to_json(c.model)}};
}

void merge_json(const json& j, TrainConfig& c) {
  reject_unknown(j,
                 {"width", "height", "points", "iterations", "rays_per_batch", "lr_tables", "lr_networks", "beta1",
                  "beta2", "lr_final_fraction", "seed", "fps", "sample_rate", "audio_seconds", "train_views",
                  "heldout_views", "gt_points", "orbit_degrees", "camera_distance", "focal_factor", "log_every",
                  "divergence_factor", "divergence_patience", "model"},
                 "train config");
  try {
    take(j, "width", c.width);
    take(j, "height", c.height);
    take(j, "points", c.points);
    take(j, "iterations", c.iterations);
    take(j, "rays_per_batch", c.rays_per_batch);
    take(j, "lr_tables", c.lr_tables);
    take(j, "lr_networks", c.lr_networks);
    take(j, "beta1", c.beta1);
    take(j, "beta2", c.beta2);
    take(j, "lr_final_fraction", c.lr_final_fraction);
    take(j, "seed", c.seed);
    take(j, "fps", c.fps);
    take(j, "sample_rate", c.sample_rate);
    take(j, "audio_seconds", c.audio_seconds);
    take(j, "train_views", c.train_views);
    take(j, "heldout_views", c.heldout_views);
    take(j, "gt_points", c.gt_points);
    take(j, "orbit_degrees", c.orbit_degrees);
    take(j, "camera_distance", c.camera_distance);
    take(j, "focal_factor", c.focal_factor);
    take(j, "log_every", c.log_every);
    take(j, "divergence_factor", c.divergence_factor);
    take(j, "divergence_patience", c.divergence_patience);
    if (j.contains("model")) c.model = model_config_from_json(j.at("model"));
  } catch (const json::exception& e) {
    fail(ErrorCode::malformed, std::string("train config: ") + e.what());
  }
  c.validate();
}

}  // namespace trihead::io
