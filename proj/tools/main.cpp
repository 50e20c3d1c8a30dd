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

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "trihead/bench/pipeline.hpp"
#include "trihead/bench/report.hpp"
#include "trihead/bench/scaling.hpp"
#include "trihead/core/error.hpp"
#include "trihead/core/runtime.hpp"
#include "trihead/io/binary.hpp"
#include "trihead/io/checkpoint.hpp"
#include "trihead/io/image_io.hpp"
#include "trihead/io/keypoint_io.hpp"
#include "trihead/io/run_config.hpp"
#include "trihead/io/wav.hpp"
#include "trihead/renderer/render.hpp"
#include "trihead/selftest.hpp"
#include "trihead/trainer/train.hpp"

namespace fs = std::filesystem;
using namespace trihead;

namespace {

constexpr const char* kExitCodes =
    "Exit codes:\n"
    "  0  success\n"
    "  1  failure (selftest check failed, training diverged, other)\n"
    "  2  usage: unknown flag, subcommand or value\n"
    "  3  missing input file\n"
    "  4  unsupported file version\n"
    "  5  malformed file: bad magic, truncation, checksum\n"
    "  6  dimension mismatch between files and configuration\n"
    "  7  numeric failure: non-finite value, divergence\n"
    "  8  output path not writable\n"
    "  9  invalid input data: empty audio, missing or degenerate keypoints\n";

// Registers the flags shared by every subcommand; values land in `run` only when given.
void add_common(CLI::App* cmd, io::RunConfig& r) {
  cmd->add_option("--config", "JSON file with the same keys as the flags; flags win");
  cmd->add_option("--seed", r.seed, "Seed for every random choice");
  cmd->add_option("--checkpoint", r.checkpoint, "Model checkpoint (.lnck)");
  cmd->add_option("--audio", r.audio, "Mono or stereo WAV, 16-bit PCM or float");
  cmd->add_option("--features", r.features, "Precomputed audio embeddings (LNAF)");
  cmd->add_option("--ref", r.reference, "Reference identity image (PPM P6)");
  cmd->add_option("--keypoints", r.keypoints, "Keypoints of the reference image");
  cmd->add_option("--blink", r.blink, "Text file with one blink value in [0,1] per frame");
  cmd->add_option("--out", r.out, "Output directory");
  cmd->add_option("--width", r.width, "Output width in pixels");
  cmd->add_option("--height", r.height, "Output height in pixels");
  cmd->add_option("--points", r.points, "Samples per ray");
  cmd->add_option("--fps", r.fps, "Video frame rate");
  cmd->add_option("--frames", r.frames, "Number of frames");
  cmd->add_option("--preset", r.preset, "desk | fast | paper")->check(CLI::IsMember({"desk", "fast", "paper"}));
  cmd->add_option("--threads", r.threads, "Renderer worker count, 0 = OpenMP default");
}

// Config file values first, then every flag given on the command line.
io::RunConfig resolve(CLI::App* cmd, const io::RunConfig& from_flags, io::RunMode mode, nlohmann::json* train_section) {
  io::RunConfig r;
  if (cmd->count("--config") > 0) {
    const std::string path = cmd->get_option("--config")->as<std::string>();
    const std::vector<char> bytes = io::read_file(path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(bytes.begin(), bytes.end());
    } catch (const std::exception& e) {
      fail(ErrorCode::malformed, path + ": " + e.what());
    }
    if (j.is_object() && j.contains("train")) {
      if (train_section != nullptr) *train_section = j.at("train");
      j.erase("train");
    }
    io::merge_json(j, r);
  }
  auto take = [&](const char* flag, auto member) {
    if (cmd->count(flag) > 0) r.*member = from_flags.*member;
  };
  take("--seed", &io::RunConfig::seed);
  take("--checkpoint", &io::RunConfig::checkpoint);
  take("--audio", &io::RunConfig::audio);
  take("--features", &io::RunConfig::features);
  take("--ref", &io::RunConfig::reference);
  take("--keypoints", &io::RunConfig::keypoints);
  take("--blink", &io::RunConfig::blink);
  take("--out", &io::RunConfig::out);
  take("--width", &io::RunConfig::width);
  take("--height", &io::RunConfig::height);
  take("--points", &io::RunConfig::points);
  take("--fps", &io::RunConfig::fps);
  take("--frames", &io::RunConfig::frames);
  take("--preset", &io::RunConfig::preset);
  take("--threads", &io::RunConfig::threads);
  if (cmd->get_option_no_throw("--iterations") != nullptr) take("--iterations", &io::RunConfig::iterations);
  r.mode = mode;
  return r;
}

std::vector<double> read_blink_file(const std::string& path) {
  const std::vector<char> bytes = io::read_file(path);
  std::istringstream in(std::string(bytes.begin(), bytes.end()));
  std::vector<double> out;
  std::string token;
  while (in >> token) {
    try {
      out.push_back(std::stod(token));
    } catch (const std::exception&) {
      fail(ErrorCode::malformed, path + ": '" + token + "' is not a number");
    }
  }
  return out;
}

std::string frame_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%05zu.ppm", i);
  return buf;
}

int run_train(const io::RunConfig& r, const nlohmann::json& train_section) {
  TrainConfig tc;
  if (!train_section.is_null()) io::merge_json(train_section, tc);
  tc.seed = r.seed;
  if (r.width) tc.width = *r.width;
  if (r.height) tc.height = *r.height;
  if (r.points) tc.points = *r.points;
  if (r.fps) tc.fps = *r.fps;
  if (r.iterations) tc.iterations = *r.iterations;
  if (r.d_a) tc.model.d_a = *r.d_a;
  if (r.landmarks) tc.model.landmarks = *r.landmarks;
  tc.model.seed = r.seed;
  tc.validate();
  r.validate_paths();

  const ToyScene scene;
  std::cout << "building toy dataset: " << tc.train_views << " views at " << tc.width << "x" << tc.height << "\n";
  const Dataset data = build_dataset(tc, scene);
  std::cout << "training " << tc.iterations << " iterations\n";
  TrainResult result = train(tc, data, [](const LossLogRow& row) {
    std::cout << "iter " << row.iteration << "  loss " << row.loss << "  psnr " << row.psnr_probe << std::endl;
  });
  const std::string ckpt = r.checkpoint.empty() ? (fs::path(r.out) / "model.lnck").string() : r.checkpoint;
  io::save_checkpoint(ckpt, result.model);
  write_loss_log((fs::path(r.out) / "loss.csv").string(), result.log);
  const EvalReport report = evaluate(result.model, tc, data, scene);
  std::ostringstream csv;
  csv << "view,psnr,lmd\n";
  for (std::size_t i = 0; i < report.views.size(); ++i) {
    csv << i << "," << report.views[i].psnr << "," << report.views[i].lmd << "\n";
  }
  io::write_text_file((fs::path(r.out) / "heldout.csv").string(), csv.str());
  std::cout << "trained in " << result.seconds << " s\n"
            << "held-out PSNR " << report.mean_psnr << " dB, LMD " << report.mean_lmd << " px\n"
            << "checkpoint " << ckpt << "\n";
  return 0;
}

int run_render(const io::RunConfig& r) {
  if (r.checkpoint.empty()) fail(ErrorCode::usage, "render needs --checkpoint");
  if (r.audio.empty() == r.features.empty()) fail(ErrorCode::usage, "render needs exactly one of --audio, --features");
  r.validate_paths();
  const io::Preset preset = io::preset_by_name(r.preset);

  io::CheckpointExpectation expect;
  expect.d_a = r.d_a;
  expect.landmarks = r.landmarks;
  const Model model = io::load_checkpoint(r.checkpoint, expect);

  PipelineConfig pc;
  pc.width = r.width.value_or(preset.width);
  pc.height = r.height.value_or(preset.height);
  pc.points = r.points.value_or(preset.points);
  pc.fps = r.fps.value_or(preset.fps);
  pc.frames = r.frames.value_or(0);
  pc.seed = r.seed;
  pc.threads = r.threads;
  if (!r.blink.empty()) pc.blink = read_blink_file(r.blink);

  PipelineInputs in;
  if (!r.audio.empty()) {
    in.audio.track = io::read_wav(r.audio);
  } else {
    in.audio.features = read_feature_file(r.features, model.d_a());
    pc.fps = in.audio.features->fps;
  }
  const ToyScene scene;
  const int landmarks = model.config.landmarks;
  if (!r.reference.empty()) {
    in.reference = io::read_ppm(r.reference);
    if (!r.keypoints.empty()) in.reference_keypoints = io::read_keypoints(r.keypoints);
  } else {
    in.reference = toy_reference(scene, pc.width, pc.height, landmarks, pc.camera_distance, pc.focal_factor);
  }
  in.toy = ToyKeypointSource{scene, ApertureMap::calibrate(in.audio.track ? in.audio.track->sample_rate : 16000,
                                                           pc.fps, model.d_a()),
                             landmarks};

  const PipelineResult result = run_pipeline(model, in, pc);
  std::ostringstream stats;
  stats << render_stats_csv_header() << "\n";
  for (std::size_t i = 0; i < result.frames.size(); ++i) {
    io::write_ppm((fs::path(r.out) / frame_name(i)).string(), result.frames[i]);
    stats << render_stats_csv_row(result.frames[i]) << "\n";
  }
  io::write_text_file((fs::path(r.out) / "render_stats.csv").string(), stats.str());
  std::cout << "wrote " << result.frames.size() << " frames to " << r.out << " (" << result.total_ms / 1000.0
            << " s)\n";
  return 0;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      fail(ErrorCode::usage, "--values: '" + item + "' is not a number");
    }
  }
  return v;
}

int run_bench(const io::RunConfig& r, const std::string& knob_text, const std::string& values_text, int repeats) {
  r.validate_paths();
  const Knob knob = parse_knob(knob_text);
  std::vector<double> values = parse_values(values_text);
  if (values.size() < 4) fail(ErrorCode::usage, "--values needs at least 4 entries");
  if (repeats < 5) fail(ErrorCode::usage, "--repeats must be at least 5");

  BenchSettings s;
  s.preset = io::preset_by_name(r.preset);
  if (r.width) s.preset.width = *r.width;
  if (r.height) s.preset.height = *r.height;
  if (r.points) s.preset.points = *r.points;
  if (r.fps) s.preset.fps = *r.fps;
  if (r.landmarks) s.preset.landmarks = *r.landmarks;
  s.repeats = repeats;
  s.seed = r.seed;
  s.threads = r.threads;

  std::vector<BenchRecord> records = measure_scaling(knob, values, s);
  std::vector<PanelFit> fits;
  const std::string name = knob_name(knob);
  auto add_fit = [&](const std::string& component, FitModel model) {
    try {
      const ScalingFit f = fit_records(records, component, model);
      fits.push_back({name, component, f});
      std::cout << name << " " << component << ": " << (model == FitModel::power ? "exponent " : "slope ") << f.b
                << ", R^2 " << f.r2 << "\n";
    } catch (const Error& e) {
      std::cout << name << " " << component << ": no fit (" << e.what() << ")\n";
    }
  };
  for (const char* c : {"audio", "rendering", "replacement", "total"}) add_fit(c, FitModel::affine);
  if (knob == Knob::resolution) add_fit("rendering", FitModel::power);
  for (const BenchRecord& rec : records) {
    if (!rec.valid) std::cout << "flagged " << rec.component << " at " << rec.value << ": " << rec.flag << "\n";
  }
  for (const std::string& path : write_report(records, fits, r.out)) std::cout << "wrote " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  keep_heap_resident();
  CLI::App app{"trihead: audio-driven talking-head rendering at desk scale"};
  app.footer(kExitCodes);
  app.require_subcommand(1);

  io::RunConfig train_flags, render_flags, bench_flags;
  CLI::App* train_cmd = app.add_subcommand("train", "Fit a model to the analytic toy head");
  add_common(train_cmd, train_flags);
  train_cmd->add_option("--iterations", train_flags.iterations, "Optimizer steps");

  CLI::App* render_cmd = app.add_subcommand("render", "Render numbered PPM frames from audio and a reference image");
  add_common(render_cmd, render_flags);

  CLI::App* bench_cmd = app.add_subcommand("bench", "Time the pipeline while sweeping one knob");
  add_common(bench_cmd, bench_flags);
  std::string knob = "frames", values = "8,16,32,64,128";
  int repeats = 5;
  bench_cmd->add_option("--knob", knob, "frames | resolution | points | audio | landmarks");
  bench_cmd->add_option("--values", values, "Comma-separated knob values");
  bench_cmd->add_option("--repeats", repeats, "Timed runs per value after one warmup");

  CLI::App* selftest_cmd = app.add_subcommand("selftest", "Run the closed-form example checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::usage);
  }

  try {
    if (*selftest_cmd) return print_selftest(run_selftest(), std::cout) ? 0 : 1;
    nlohmann::json train_section;
    if (*train_cmd) return run_train(resolve(train_cmd, train_flags, io::RunMode::train, &train_section), train_section);
    if (*render_cmd) return run_render(resolve(render_cmd, render_flags, io::RunMode::render, nullptr));
    if (*bench_cmd) return run_bench(resolve(bench_cmd, bench_flags, io::RunMode::bench, nullptr), knob, values, repeats);
  } catch (const Error& e) {
    std::cerr << "error [" << error_code_name(e.code()) << "]: " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::failure);
  }
  return static_cast<int>(ExitCode::usage);
}
