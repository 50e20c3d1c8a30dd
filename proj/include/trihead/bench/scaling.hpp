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
#include <string>
#include <vector>

#include "trihead/io/run_config.hpp"
#include "trihead/model.hpp"

namespace trihead {

enum class Knob { frames, resolution, points, audio, landmarks };

Knob parse_knob(const std::string& name);
std::string knob_name(Knob knob);

struct BenchRecord {
  std::string knob;
  double value = 0.0;
  std::string component;  // audio, rendering, replacement, total
  double wall_ms = 0.0;   // median of the repeats
  int repeats = 0;
  std::vector<double> samples;
  std::string fingerprint;
  /// False when the repeats are too noisy or too short to time; excluded from fits.
  bool valid = true;
  std::string flag;
};

struct BenchSettings {
  io::Preset preset = io::preset_by_name("desk");
  int repeats = 5;
  std::uint64_t seed = 7;
  int threads = 0;
  /// Frames rendered per run for knobs other than `frames`.
  int frames_per_run = 4;
  /// Audio duration for knobs other than `audio`, in seconds.
  double audio_seconds = 6.0;
  /// Largest accepted median absolute deviation, as a fraction of the median.
  double max_relative_mad = 0.10;
  /// Values with a record over the MAD limit get extra runs, interleaved among
  /// themselves, until every record passes or it has this many samples.
  int max_repeats = 20;
};

/// CPU model, worker count and build flags.
std::string machine_fingerprint(int threads = 0);

/// Runs the pipeline once as warmup and `repeats` more times per value (more for noisy
/// values, see max_repeats), pinning every other knob to the preset. Rendering and replacement records are per-frame means;
/// audio and total are per run.
std::vector<BenchRecord> measure_scaling(Knob knob, const std::vector<double>& values, const BenchSettings& settings);

/// Marks records whose MAD exceeds the limit or whose median spans fewer than 20
/// timer ticks.
void apply_hygiene(BenchRecord& record, double max_relative_mad);

double median(std::vector<double> v);

enum class FitModel { affine, power, inverse };

struct ScalingFit {
  FitModel model = FitModel::affine;
  double a = 0.0;  // intercept (affine), coefficient (power, inverse)
  double b = 0.0;  // slope (affine), exponent (power); unused for inverse
  double r2 = 0.0;
  double residual_max = 0.0;
  std::size_t points = 0;

  double predict(double x) const;
};

/// affine: y = a + b x. power: log y = log a + b log x. inverse: y = a / x. Needs at
/// least 4 points; the power model rejects nonpositive values. R^2 is clamped to [0,1].
ScalingFit fit_scaling(const std::vector<double>& x, const std::vector<double>& y, FitModel model);

/// Fit over the valid records of one component. Resolution values are side lengths and
/// are fitted against pixel count.
ScalingFit fit_records(const std::vector<BenchRecord>& records, const std::string& component, FitModel model);

}  // namespace trihead
