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

// Serial double-precision reference renderer against the tiled OpenMP renderer, plus
// the per-point kernels both are built from.

#include <benchmark/benchmark.h>

#include <vector>

#include "trihead/core/rng.hpp"
#include "trihead/model.hpp"
#include "trihead/renderer/camera.hpp"
#include "trihead/renderer/render.hpp"
#include "trihead/triplane.hpp"

namespace {

using namespace trihead;

struct Fixture {
  Model model;
  Camera camera;
  std::vector<double> e_a;

  explicit Fixture(int side) {
    ModelConfig c;
    c.layout.resolutions = {16, 32, 64, 128};
    c.layout.feature_dim_per_level = 2;
    model = Model::create(c);
    camera = Camera::orbit(0.0, 0.0, 2.6, 1.5, side, side);
    Rng rng(3);
    e_a.resize(static_cast<std::size_t>(model.d_a()));
    for (double& v : e_a) v = rng.normal();
  }
};

void BM_RenderReference(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  RenderOptions opt;
  opt.points = 16;
  for (auto _ : state) benchmark::DoNotOptimize(render_frame_reference(f.model, f.camera, f.e_a, 0.3, opt).rgb.data());
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_RenderParallel(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  const FrameRenderer renderer(f.model);
  RenderOptions opt;
  opt.points = 16;
  opt.threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(renderer.render(f.camera, f.e_a, 0.3, opt).rgb.data());
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_TriplaneScalar(benchmark::State& state) {
  const Fixture f(8);
  Rng rng(5);
  std::vector<Vec3> pts(4096);
  for (Vec3& p : pts) p = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
  std::vector<double> out(static_cast<std::size_t>(f.model.grid.output_dim()));
  for (auto _ : state) {
    for (const Vec3& p : pts) triplane_encode(f.model.grid, p, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}

void BM_TriplaneKernel(benchmark::State& state) {
  const Fixture f(8);
  const TriPlaneKernel<InferReal> kernel(f.model.grid);
  Rng rng(5);
  std::vector<InferReal> uvw(3 * 4096);
  for (InferReal& v : uvw) v = static_cast<InferReal>(rng.uniform());
  std::vector<InferReal> out(static_cast<std::size_t>(3 * kernel.d_h()));
  for (auto _ : state) {
    for (std::size_t i = 0; i < 4096; ++i) kernel.encode(&uvw[3 * i], out.data());
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * 4096);
}

}  // namespace

BENCHMARK(BM_RenderReference)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RenderParallel)->Args({32, 1})->Args({64, 1})->Args({64, 4})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TriplaneScalar);
BENCHMARK(BM_TriplaneKernel);

BENCHMARK_MAIN();
