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

#include "json.hpp"

#include "trihead/model.hpp"
#include "trihead/trainer/dataset.hpp"

namespace trihead::io {

enum class RunMode { train, render, bench, selftest };

RunMode parse_run_mode(const std::string& name);
std::string run_mode_name(RunMode mode);

/// Sizes shared by the render and bench presets.
struct Preset {
  std::string name;
  int width = 128;
  int height = 128;
  int points = 32;
  int d_h = 8;
  int d_a = 32;
  int landmarks = 68;
  double fps = 25.0;
};

/// desk: 128x128, P=32. fast: 64x64, P=16. paper: 512x512, P=64.
Preset preset_by_name(const std::string& name);

/// Options for every subcommand. Unset optionals fall back to the preset or the
/// checkpoint.
struct RunConfig {
  RunMode mode = RunMode::render;
  std::string preset = "desk";
  std::uint64_t seed = 7;
  std::string checkpoint;
  std::string audio;
  std::string features;
  std::string reference;
  std::string keypoints;
  std::string blink;
  std::string out = "out";
  std::optional<int> width;
  std::optional<int> height;
  std::optional<int> points;
  std::optional<double> fps;
  std::optional<int> frames;
  std::optional<int> d_a;
  std::optional<int> landmarks;
  std::optional<int> iterations;
  int threads = 0;

  /// Throws missing_file for named inputs that do not exist and unwritable_path when
  /// the output directory cannot be created.
  void validate_paths() const;
};

nlohmann::json to_json(const RunConfig& c);
/// Only keys present in `j` change `c`; unknown keys throw invalid_argument.
void merge_json(const nlohmann::json& j, RunConfig& c);
RunConfig load_run_config(const std::string& path);

nlohmann::json to_json(const ModelConfig& c);
ModelConfig model_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TrainConfig& c);
void merge_json(const nlohmann::json& j, TrainConfig& c);

}  // namespace trihead::io
