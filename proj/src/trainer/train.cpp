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

#include "trihead/trainer/train.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include "trihead/core/error.hpp"
#include "trihead/core/optimizer.hpp"
#include "trihead/core/rng.hpp"
#include "trihead/renderer/field_batch.hpp"
#include "trihead/renderer/render.hpp"
#include "trihead/trainer/detect.hpp"
#include "trihead/trainer/metrics.hpp"

namespace trihead {

double batch_loss(const Model& model, const RayBatch& batch, ModelGradient* grad, Eigen::MatrixXd* pred) {
  const int P = batch.points;
  const Eigen::Index rays = static_cast<Eigen::Index>(batch.rays());
  if (rays == 0) fail(ErrorCode::invalid_argument, "empty ray batch");
  if (batch.e_a.cols() != rays || batch.blink.size() != rays || batch.target.cols() != rays) {
    fail(ErrorCode::dimension_mismatch, "ray batch shapes");
  }
  const FieldBatch<double> field(model);
  FieldTape<double> tape;
  tape.points_per_ray = P;
  tape.uvw.resize(3, rays * P);
  tape.e_a = batch.e_a;
  tape.blink = batch.blink;
  tape.dirs.resize(3, rays);
  std::vector<double> delta(static_cast<std::size_t>(rays * P));
  std::vector<double> depth(P);
  for (Eigen::Index r = 0; r < rays; ++r) {
    tape.dirs.col(r) = batch.direction[r];
    std::span<double> dl(delta.data() + r * P, P);
    sample_depths(batch.near[r], batch.far[r], batch.mode,
                  {batch.seed, batch.step, static_cast<std::uint64_t>(r)}, depth, dl);
    for (int k = 0; k < P; ++k) {
      tape.uvw.col(r * P + k) = model.grid.box.normalize(batch.origin[r] + depth[k] * batch.direction[r]);
    }
  }
  field.forward(tape);
  const Eigen::MatrixXd& rgb = tape.rgb();
  const Vec3 bg = model.config.background;

  // Composite, then the MSE upstream and the compositing backprop per ray.
  Eigen::MatrixXd d_sigma = Eigen::MatrixXd::Zero(1, rays * P);
  Eigen::MatrixXd d_rgb = Eigen::MatrixXd::Zero(3, rays * P);
  std::vector<double> trans(P + 1), weight(P);
  double loss = 0.0;
  const double scale = 1.0 / static_cast<double>(3 * rays);
  if (pred != nullptr) pred->resize(3, rays);
  for (Eigen::Index r = 0; r < rays; ++r) {
    trans[0] = 1.0;
    Vec3 c = Vec3::Zero();
    for (int k = 0; k < P; ++k) {
      const Eigen::Index col = r * P + k;
      const double keep = std::exp(-tape.sigma(0, col) * delta[col]);
      weight[k] = trans[k] * (1.0 - keep);
      trans[k + 1] = trans[k] * keep;
      c += weight[k] * rgb.col(col);
    }
    c += trans[P] * bg;
    if (pred != nullptr) pred->col(r) = c;
    const Vec3 diff = c - batch.target.col(r);
    loss += diff.squaredNorm();
    if (grad == nullptr) continue;
    const Vec3 up = 2.0 * scale * diff;
    double tail = trans[P] * up.dot(bg);
    for (int k = P; k-- > 0;) {
      const Eigen::Index col = r * P + k;
      const double proj = up.dot(rgb.col(col));
      d_sigma(0, col) = delta[col] * (trans[k + 1] * proj - tail);
      d_rgb.col(col) = weight[k] * up;
      tail += weight[k] * proj;
    }
  }
  if (grad != nullptr) field.backward(tape, d_sigma, d_rgb, *grad);
  return loss * scale;
}

RayBatch sample_batch(const Model& model, const TrainConfig& config, const std::vector<TrainView>& views,
                      const AudioEmbeddingSequence& embeddings, std::uint64_t step, Rng& rng) {
  RayBatch b;
  b.points = config.points;
  b.seed = config.seed;
  b.step = step;
  const int n = config.rays_per_batch;
  b.e_a.resize(model.config.d_a, n);
  b.blink.resize(n);
  b.target.resize(3, n);
  std::vector<double> e(static_cast<std::size_t>(model.config.d_a));
  for (int r = 0; r < n; ++r) {
    const TrainView& v = views[rng.below(views.size())];
    const std::uint64_t pixel = rng.below(static_cast<std::uint64_t>(v.target.pixel_count()));
    const int row = static_cast<int>(pixel / v.target.width);
    const int col = static_cast<int>(pixel % v.target.width);
    b.origin.push_back(v.camera.position);
    b.direction.push_back(pixel_direction(v.camera, row, col));
    b.near.push_back(v.camera.near);
    b.far.push_back(v.camera.far);
    model.normalizer.apply(embeddings.row(v.frame), e);
    b.e_a.col(r) = Eigen::Map<const Eigen::VectorXd>(e.data(), model.config.d_a);
    b.blink[r] = v.blink;
    for (int ch = 0; ch < 3; ++ch) b.target(ch, r) = v.target.at(row, col, ch);
  }
  return b;
}

namespace {

std::size_t network_parameter_count(const Model& m) {
  return m.gates.mlp_a.parameter_count() + m.gates.mlp_b.parameter_count() + m.field.trunk.parameter_count() +
         m.field.color.parameter_count();
}

template <typename F>
void for_each_network(F&& f, Mlp& a, Mlp& b, Mlp& trunk, Mlp& color) {
  f(a);
  f(b);
  f(trunk);
  f(color);
}

}  // namespace

TrainResult train(const TrainConfig& config, const Dataset& data,
                  const std::function<void(const LossLogRow&)>& on_log) {
  config.validate();
  if (data.train.empty()) fail(ErrorCode::invalid_argument, "training needs at least one view");
  const auto start = std::chrono::steady_clock::now();
  TrainResult result;
  Model& model = result.model;
  model = Model::create(config.model);
  model.normalizer = EmbeddingNormalizer::fit(data.embeddings);

  std::vector<double> tables(model.grid.parameter_count());
  std::vector<double> nets(network_parameter_count(model));
  std::vector<double> g_tables(tables.size());
  std::vector<double> g_nets(nets.size());
  OptimizerState opt_tables;
  opt_tables.beta1 = config.beta1;
  opt_tables.beta2 = config.beta2;
  opt_tables.epsilon = 1e-15;
  OptimizerState opt_nets = opt_tables;
  ModelGradient grad = ModelGradient::zeros_like(model);
  Rng rng(config.seed);
  double first_loss = 0.0;
  int above = 0;

  auto flatten_networks = [&](std::span<double> out, bool gradients) {
    std::size_t off = 0;
    auto put = [&](const auto& x) {
      const std::size_t n = x.parameter_count();
      x.copy_parameters_to(out.subspan(off, n));
      off += n;
    };
    if (gradients) {
      put(grad.mlp_a);
      put(grad.mlp_b);
      put(grad.trunk);
      put(grad.color);
    } else {
      put(model.gates.mlp_a);
      put(model.gates.mlp_b);
      put(model.field.trunk);
      put(model.field.color);
    }
  };

  model.grid.copy_parameters_to(tables);
  flatten_networks(nets, false);
  const double decay = config.iterations > 1 ? std::log(config.lr_final_fraction) / (config.iterations - 1) : 0.0;

  for (int it = 0; it < config.iterations; ++it) {
    const RayBatch batch = sample_batch(model, config, data.train, data.embeddings, static_cast<std::uint64_t>(it), rng);
    grad.set_zero();
    const double loss = batch_loss(model, batch, &grad);
    if (!std::isfinite(loss)) fail(ErrorCode::non_finite, "loss at iteration " + std::to_string(it));
    if (it == 0) first_loss = loss;
    above = loss > config.divergence_factor * first_loss ? above + 1 : 0;
    if (above >= config.divergence_patience) {
      fail(ErrorCode::divergence, "loss " + std::to_string(loss) + " at iteration " + std::to_string(it) +
                                      " exceeded " + std::to_string(config.divergence_factor) + "x the initial " +
                                      std::to_string(first_loss) + " for " + std::to_string(above) + " iterations");
    }
    if (it % config.log_every == 0) {
      const LossLogRow row{it, loss, psnr_from_mse(loss)};
      result.log.push_back(row);
      if (on_log) on_log(row);
    }

    grad.grid.copy_parameters_to(g_tables);
    flatten_networks(g_nets, true);
    const double lr_scale = std::exp(decay * it);
    opt_tables.learning_rate = config.lr_tables * lr_scale;
    opt_nets.learning_rate = config.lr_networks * lr_scale;
    const ParamGroup table_group{"tables", tables, g_tables};
    const ParamGroup net_group{"networks", nets, g_nets};
    optimizer_step(opt_tables, std::span(&table_group, 1));
    optimizer_step(opt_nets, std::span(&net_group, 1));
    model.grid.set_parameters(tables);
    std::size_t off = 0;
    for_each_network(
        [&](Mlp& m) {
          const std::size_t n = m.parameter_count();
          m.set_parameters(std::span<const double>(nets).subspan(off, n));
          off += n;
        },
        model.gates.mlp_a, model.gates.mlp_b, model.field.trunk, model.field.color);
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

void write_loss_log(const std::string& path, const std::vector<LossLogRow>& rows) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::unwritable_path, path);
  out.precision(17);
  out << "iteration,loss,psnr_probe\n";
  for (const LossLogRow& r : rows) out << r.iteration << ',' << r.loss << ',' << r.psnr_probe << '\n';
  if (!out) fail(ErrorCode::unwritable_path, path);
}

EvalReport evaluate(const Model& model, const TrainConfig& config, const Dataset& data, const ToyScene& scene) {
  EvalReport report;
  const FrameRenderer renderer(model);
  for (std::size_t k = 0; k < data.heldout.size(); ++k) {
    const TrainView& v = data.heldout[k];
    RenderOptions opt;
    opt.points = config.points;
    opt.seed = config.seed;
    opt.frame_index = static_cast<int>(k);
    const Frame frame = renderer.render(v.camera, data.embeddings.row(v.frame), v.blink, opt);
    const KeypointFit fit = detect_keypoints(frame, scene, v.camera, config.model.landmarks, config.model.background);
    ViewScore s;
    s.psnr = metric_psnr(frame, v.target);
    s.lmd = metric_lmd(fit.keypoints, v.keypoints, frame.width, frame.height);
    s.fitted_aperture = fit.aperture;
    s.fitted_blink = fit.blink;
    report.views.push_back(s);
    report.mean_psnr += s.psnr;
    report.mean_lmd += s.lmd;
  }
  if (!report.views.empty()) {
    report.mean_psnr /= static_cast<double>(report.views.size());
    report.mean_lmd /= static_cast<double>(report.views.size());
  }
  return report;
}

}  // namespace trihead
