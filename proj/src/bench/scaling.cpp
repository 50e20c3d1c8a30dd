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

#include "trihead/bench/scaling.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>

#include "trihead/bench/pipeline.hpp"
#include "trihead/core/error.hpp"
#include "trihead/trainer/toy_scene.hpp"

namespace trihead {

namespace {

constexpr const char* kBelowTick = "below timer resolution";

}  // namespace

Knob parse_knob(const std::string& name) {
  if (name == "frames") return Knob::frames;
  if (name == "resolution") return Knob::resolution;
  if (name == "points") return Knob::points;
  if (name == "audio") return Knob::audio;
  if (name == "landmarks") return Knob::landmarks;
  fail(ErrorCode::usage, "unknown knob '" + name + "' (frames, resolution, points, audio, landmarks)");
}

std::string knob_name(Knob knob) {
  switch (knob) {
    case Knob::frames: return "frames";
    case Knob::resolution: return "resolution";
    case Knob::points: return "points";
    case Knob::audio: return "audio";
    case Knob::landmarks: return "landmarks";
  }
  return "frames";
}

std::string machine_fingerprint(int threads) {
  std::string cpu = "unknown-cpu";
  std::ifstream info("/proc/cpuinfo");
  for (std::string line; std::getline(info, line);) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) cpu = line.substr(colon + 2);
      break;
    }
  }
  const int workers = threads > 0 ? threads : omp_get_max_threads();
  std::string s = cpu + "; workers=" + std::to_string(workers) + "; gcc " + __VERSION__;
#ifdef TRIHEAD_FLOAT_INFERENCE
  s += "; float inference";
#else
  s += "; double inference";
#endif
  return s;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void apply_hygiene(BenchRecord& record, double max_relative_mad) {
  record.wall_ms = median(record.samples);
  record.repeats = static_cast<int>(record.samples.size());
  std::vector<double> dev;
  for (double s : record.samples) dev.push_back(std::abs(s - record.wall_ms));
  const double mad = median(dev);
  using Period = std::chrono::steady_clock::period;
  const double tick_ms = 1e3 * static_cast<double>(Period::num) / static_cast<double>(Period::den);
  record.valid = true;
  record.flag.clear();
  if (!(record.wall_ms > 0.0) || record.wall_ms < 20.0 * tick_ms) {
    record.valid = false;
    record.flag = kBelowTick;
  } else if (mad > max_relative_mad * record.wall_ms) {
    record.valid = false;
    record.flag = "MAD " + std::to_string(mad) + " ms exceeds " + std::to_string(100.0 * max_relative_mad) + "% of median";
  }
}

std::vector<BenchRecord> measure_scaling(Knob knob, const std::vector<double>& values, const BenchSettings& settings) {
  if (values.size() < 4) fail(ErrorCode::invalid_argument, "measure_scaling needs at least 4 knob values");
  if (settings.repeats < 5) fail(ErrorCode::invalid_argument, "measure_scaling needs at least 5 repeats");
  const io::Preset& p = settings.preset;
  const std::string fingerprint = machine_fingerprint(settings.threads);
  const ToyScene scene;
  const ApertureMap aperture = ApertureMap::calibrate(16000, p.fps, p.d_a);
  const double max_value = *std::max_element(values.begin(), values.end());

  struct Setup {
    Model model;
    PipelineInputs inputs;
    PipelineConfig config;
    std::map<std::string, BenchRecord> by_component;
  };
  std::vector<Setup> setups;
  for (double value : values) {
    if (!(value > 0.0)) fail(ErrorCode::invalid_argument, "knob values must be positive");
    int side_w = p.width, side_h = p.height, points = p.points, landmarks = p.landmarks;
    int frames = settings.frames_per_run;
    double seconds = settings.audio_seconds;
    const int iv = static_cast<int>(std::lround(value));
    switch (knob) {
      case Knob::frames:
        frames = iv;
        seconds = max_value / p.fps;
        break;
      case Knob::resolution: side_w = side_h = iv; break;
      case Knob::points: points = iv; break;
      case Knob::audio: seconds = value; break;
      case Knob::landmarks: landmarks = iv; break;
    }

    ModelConfig mc;
    mc.d_a = p.d_a;
    mc.landmarks = landmarks;
    mc.layout.feature_dim_per_level = p.d_h / static_cast<int>(mc.layout.resolutions.size());
    mc.seed = settings.seed;
    Setup su{Model::create(mc), {}, {}, {}};
    su.inputs.audio.track = make_toy_audio(seconds, 16000, settings.seed).track;
    su.inputs.reference = toy_reference(scene, side_w, side_h, landmarks);
    su.inputs.toy = ToyKeypointSource{scene, aperture, landmarks};
    PipelineConfig& pc = su.config;
    pc.width = side_w;
    pc.height = side_h;
    pc.points = points;
    pc.fps = p.fps;
    pc.frames = frames;
    pc.seed = settings.seed;
    pc.threads = settings.threads;
    pc.keep_frames = false;
    for (const char* c : {"audio", "rendering", "replacement", "total"}) {
      BenchRecord r;
      r.knob = knob_name(knob);
      r.value = value;
      r.component = c;
      r.fingerprint = fingerprint;
      su.by_component[c] = r;
    }
    setups.push_back(std::move(su));
  }

  // Repeats interleave across knob values.
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };
  auto run_once = [&](Setup& su) {
    const PipelineResult res = run_pipeline(su.model, su.inputs, su.config);
    su.by_component["audio"].samples.push_back(res.audio_ms);
    su.by_component["rendering"].samples.push_back(mean(res.render_ms));
    su.by_component["replacement"].samples.push_back(mean(res.replace_ms));
    su.by_component["total"].samples.push_back(res.total_ms);
  };
  for (Setup& su : setups) run_pipeline(su.model, su.inputs, su.config);  // warmup
  for (int rep = 0; rep < settings.repeats; ++rep) {
    for (Setup& su : setups) run_once(su);
  }
  auto noisy = [&](Setup& su) {
    bool any = false;
    for (auto& [name, r] : su.by_component) {
      apply_hygiene(r, settings.max_relative_mad);
      any = any || (!r.valid && r.flag != kBelowTick);
    }
    return any;
  };
  for (int rep = settings.repeats; rep < settings.max_repeats; ++rep) {
    bool again = false;
    for (Setup& su : setups) {
      if (noisy(su)) {
        run_once(su);
        again = true;
      }
    }
    if (!again) break;
  }

  std::vector<BenchRecord> records;
  for (Setup& su : setups) {
    for (const char* c : {"audio", "rendering", "replacement", "total"}) {
      BenchRecord& r = su.by_component[c];
      apply_hygiene(r, settings.max_relative_mad);
      records.push_back(r);
    }
  }
  return records;
}

double ScalingFit::predict(double x) const {
  switch (model) {
    case FitModel::affine: return a + b * x;
    case FitModel::power: return a * std::pow(x, b);
    case FitModel::inverse: return a / x;
  }
  return 0.0;
}

ScalingFit fit_scaling(const std::vector<double>& x, const std::vector<double>& y, FitModel model) {
  require_size("fit points", x.size(), y.size());
  if (x.size() < 4) fail(ErrorCode::invalid_argument, "fit_scaling needs at least 4 points");
  ScalingFit fit;
  fit.model = model;
  fit.points = x.size();
  const std::size_t n = x.size();
  std::vector<double> fx(x), fy(y);
  if (model == FitModel::power) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!(x[i] > 0.0) || !(y[i] > 0.0)) fail(ErrorCode::invalid_argument, "power fit needs positive values");
      fx[i] = std::log(x[i]);
      fy[i] = std::log(y[i]);
    }
  }
  if (model == FitModel::inverse) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] == 0.0) fail(ErrorCode::invalid_argument, "inverse fit needs nonzero x");
      num += y[i] / x[i];
      den += 1.0 / (x[i] * x[i]);
    }
    fit.a = num / den;
  } else {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mx += fx[i];
      my += fy[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sxx += (fx[i] - mx) * (fx[i] - mx);
      sxy += (fx[i] - mx) * (fy[i] - my);
    }
    if (!(sxx > 0.0)) fail(ErrorCode::invalid_argument, "fit_scaling needs distinct x values");
    fit.b = sxy / sxx;
    const double intercept = my - fit.b * mx;
    fit.a = model == FitModel::power ? std::exp(intercept) : intercept;
  }
  // R^2 in the space the model is fitted in.
  double mean_y = 0.0;
  for (double v : fy) mean_y += v;
  mean_y /= static_cast<double>(n);
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pred = model == FitModel::power ? std::log(fit.a) + fit.b * fx[i] : fit.predict(x[i]);
    ss_res += (fy[i] - pred) * (fy[i] - pred);
    ss_tot += (fy[i] - mean_y) * (fy[i] - mean_y);
    fit.residual_max = std::max(fit.residual_max, std::abs(y[i] - fit.predict(x[i])));
  }
  fit.r2 = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : (ss_res == 0.0 ? 1.0 : 0.0);
  return fit;
}

ScalingFit fit_records(const std::vector<BenchRecord>& records, const std::string& component, FitModel model) {
  std::vector<double> x, y;
  for (const BenchRecord& r : records) {
    if (r.component != component || !r.valid) continue;
    x.push_back(r.knob == "resolution" ? r.value * r.value : r.value);
    y.push_back(r.wall_ms);
  }
  return fit_scaling(x, y, model);
}

}  // namespace trihead
