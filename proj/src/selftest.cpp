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

#include "trihead/selftest.hpp"

#include <cmath>
#include <functional>
#include <iomanip>

#include "trihead/bench/report.hpp"
#include "trihead/bench/scaling.hpp"
#include "trihead/conditioning/audio.hpp"
#include "trihead/conditioning/gates.hpp"
#include "trihead/core/error.hpp"
#include "trihead/core/mlp.hpp"
#include "trihead/core/optimizer.hpp"
#include "trihead/facerep/motion.hpp"
#include "trihead/facerep/synthesize.hpp"
#include "trihead/facerep/warp.hpp"
#include "trihead/io/checkpoint.hpp"
#include "trihead/io/image_io.hpp"
#include "trihead/renderer/camera.hpp"
#include "trihead/renderer/composite.hpp"
#include "trihead/renderer/field.hpp"
#include "trihead/renderer/sampling.hpp"
#include "trihead/trainer/metrics.hpp"
#include "trihead/triplane.hpp"

namespace trihead {

namespace {

using Check = std::function<bool()>;

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

template <typename F>
bool throws_code(ErrorCode code, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace

std::vector<SelftestResult> run_selftest() {
  std::vector<std::tuple<std::string, std::string, Check>> checks;
  auto add = [&checks](std::string m, std::string n, Check c) { checks.emplace_back(std::move(m), std::move(n), std::move(c)); };

  add("core-math", "identity layer passes input", [] {
    Mlp net({2, 2}, Activation::identity, Activation::identity);
    net.layers()[0].weight = Eigen::Matrix2d::Identity();
    const auto y = mlp_eval(net, std::vector<double>{3.0, -1.0});
    return y[0] == 3.0 && y[1] == -1.0;
  });
  add("core-math", "sigmoid output at zero is 0.5", [] {
    Mlp net({2, 1}, Activation::identity, Activation::sigmoid);
    net.layers()[0].weight.setOnes();
    return mlp_eval(net, std::vector<double>{0.0, 0.0})[0] == 0.5;
  });
  add("core-math", "linear backprop dW = x, db = 1, dx = w", [] {
    Mlp net({1, 1}, Activation::identity, Activation::identity);
    net.layers()[0].weight(0, 0) = 1.0;
    const GradBundle g = mlp_backprop(net, std::vector<double>{2.0}, std::vector<double>{1.0});
    return g.layers[0].weight(0, 0) == 2.0 && g.layers[0].bias[0] == 1.0 && g.input[0] == 1.0;
  });
  add("core-math", "sgd step", [] {
    std::vector<double> p{1.0};
    const std::vector<double> g{2.0};
    OptimizerState s;
    s.method = OptimizerMethod::sgd;
    s.learning_rate = 0.1;
    const ParamGroup group{"p", p, g};
    optimizer_step(s, std::span(&group, 1));
    return near(p[0], 0.8, 1e-15);
  });
  add("core-math", "adam first step moves by lr", [] {
    std::vector<double> p{0.0};
    const std::vector<double> g{1.0};
    OptimizerState s;
    s.learning_rate = 0.001;
    const ParamGroup group{"p", p, g};
    optimizer_step(s, std::span(&group, 1));
    return near(p[0], -0.001, 1e-10);
  });

  add("triplane", "dense addressing (2,3) at res 4 is 14", [] {
    HashLevel l;
    l.grid_resolution = 4;
    l.table_size = 16;
    return hash_cell(l, 2, 3) == 14u;
  });
  add("triplane", "zero tables encode to zero", [] {
    TriPlaneGrid g = TriPlaneGrid::create(TriPlaneLayout{}, BoundingBox{}, 1, 0.0);
    for (double v : triplane_encode(g, 0.3, -0.2, 0.7)) {
      if (v != 0.0) return false;
    }
    return true;
  });
  add("triplane", "cell centre spreads weight 0.25", [] {
    HashLevel l;
    l.grid_resolution = 4;
    l.table_size = 16;
    const BilinearCorners c = bilinear_corners(l, 0.5 / 3.0, 0.5 / 3.0);
    for (double w : c.weight) {
      if (!near(w, 0.25, 1e-15)) return false;
    }
    return true;
  });

  add("conditioning", "2 s track at 25 fps gives 50 frames", [] { return frame_count(32000, 16000, 25.0) == 50; });
  add("conditioning", "zero audio embedding gates to zero", [] {
    const GateNets g = GateNets::create(24, 32, 8, 3);
    const std::vector<double> f(24, 0.3), e(32, 0.0);
    for (double v : condition_audio(g, f, e).gated) {
      if (v != 0.0) return false;
    }
    return true;
  });
  add("conditioning", "B = 0 gates to zero", [] {
    const GateNets g = GateNets::create(24, 32, 8, 3);
    return condition_blink(g, std::vector<double>(24, 0.7), 0.0).value == 0.0;
  });

  add("renderer", "principal ray is (0,0,-1)", [] {
    Camera c;
    c.position = Vec3::Zero();
    c.width = c.height = 3;
    return (pixel_direction(c, 1, 1) - Vec3(0, 0, -1)).norm() == 0.0;
  });
  add("renderer", "uniform depths are bin left edges", [] {
    const RaySamples s = sample_ray(1.0, 2.0, 5, SampleMode::uniform, {});
    for (int k = 0; k < 5; ++k) {
      if (!near(s.depth[k], 1.0 + 0.2 * k, 1e-15) || !near(s.delta[k], 0.2, 1e-15)) return false;
    }
    return true;
  });
  add("renderer", "zero density composites to background", [] {
    SampleBatch b;
    b.delta.assign(8, 0.1);
    b.sigma.assign(8, 0.0);
    b.color.assign(8, Vec3(0.2, 0.4, 0.6));
    return composite_ray(b, Vec3(0.1, 0.2, 0.3)).color == Vec3(0.1, 0.2, 0.3);
  });
  add("renderer", "zero network gives ln 2 and grey", [] {
    RadianceField f = RadianceField::create(24, 32, 16, 8, 8, 1);
    for (Mlp* m : {&f.trunk, &f.color}) {
      for (auto& l : m->layers()) {
        l.weight.setZero();
        l.bias.setZero();
      }
    }
    const FieldSample s = query_field(f, std::vector<double>(24, 0.5), Vec3(0, 0, -1), std::vector<double>(32, 0.1), 0.2);
    return near(s.sigma, std::log(2.0), 1e-15) && s.rgb == Vec3(0.5, 0.5, 0.5);
  });

  add("facerep", "self alignment is identity", [] {
    KeypointSet kp{{{0.2, 0.3}, {0.7, 0.35}, {0.5, 0.8}, {0.45, 0.5}}};
    Frame f(8, 8);
    const MotionParams m = extract_motion(f, f, &kp, &kp);
    return near(m.scale, 1.0, 1e-12) && (m.rotation - Mat3::Identity()).norm() < 1e-12 && m.translation.norm() < 1e-12;
  });
  add("facerep", "equal keypoints give a zero warp", [] {
    KeypointSet kp{{{0.2, 0.3}, {0.7, 0.35}}};
    for (double v : build_warp(kp, kp, 8, 8, 2.0).disp) {
      if (v != 0.0) return false;
    }
    return true;
  });
  add("facerep", "mask 0 synthesizes the reference", [] {
    Frame o(6, 6, 0.3), r(6, 6, 0.8);
    KeypointSet kp{{{0.5, 0.5}}};
    const Frame out = synthesize(o, r, kp, kp, make_identity_decoder(4, 1), FaceRegionMask::constant(6, 6, 0.0), 1.0);
    return out.rgb == r.rgb;
  });

  add("trainer", "psnr of a 0.1 offset is 20 dB", [] {
    return near(metric_psnr(Frame(4, 4, 0.5), Frame(4, 4, 0.6)), 20.0, 1e-9);
  });
  add("trainer", "lmd of a (3,4) pixel offset is 5", [] {
    KeypointSet a{{{0.1, 0.1}}}, b{{{0.1 + 3.0 / 64, 0.1 + 4.0 / 64}}};
    return near(metric_lmd(a, b, 64, 64), 5.0, 1e-12);
  });

  add("bench", "affine fit of y = 2 + 3x", [] {
    const ScalingFit f = fit_scaling({1, 2, 3, 4, 5}, {5, 8, 11, 14, 17}, FitModel::affine);
    return near(f.a, 2.0, 1e-12) && near(f.b, 3.0, 1e-12) && near(f.r2, 1.0, 1e-12);
  });
  add("bench", "power fit of y = x^2", [] {
    const ScalingFit f = fit_scaling({1, 2, 3, 4}, {1, 4, 9, 16}, FitModel::power);
    return near(f.b, 2.0, 1e-12) && near(f.r2, 1.0, 1e-12);
  });
  add("bench", "empty report is rejected", [] {
    return throws_code(ErrorCode::no_records, [] { write_report({}, {}, "/nonexistent/never-created"); });
  });

  add("cli-io", "white pixel decodes to 1", [] {
    const std::string s = "P6\n1 1\n255\n\xff\xff\xff";
    return io::decode_ppm(std::vector<char>(s.begin(), s.end())).rgb == std::vector<double>{1.0, 1.0, 1.0};
  });
  add("cli-io", "checkpoint round trip", [] {
    ModelConfig c;
    c.layout.resolutions = {4, 8};
    const Model m = Model::create(c);
    return io::decode_checkpoint(io::encode_checkpoint(m)).parameters() == m.parameters();
  });

  std::vector<SelftestResult> results;
  for (auto& [module, name, check] : checks) {
    SelftestResult r{module, name, false, ""};
    try {
      r.passed = check();
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    results.push_back(r);
  }
  return results;
}

bool print_selftest(const std::vector<SelftestResult>& results, std::ostream& os) {
  std::size_t passed = 0;
  for (const SelftestResult& r : results) {
    os << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(14) << r.module << r.name;
    if (!r.detail.empty()) os << "  (" << r.detail << ")";
    os << '\n';
    passed += r.passed ? 1 : 0;
  }
  os << passed << "/" << results.size() << " checks passed\n";
  return passed == results.size();
}

}  // namespace trihead
