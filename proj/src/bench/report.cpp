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

#include "trihead/bench/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "trihead/core/error.hpp"
#include "trihead/io/binary.hpp"

namespace trihead {

std::map<std::string, std::string> reference_context() {
  return {{"fps_512", "33 FPS at 512x512 on an RTX 4090"},
          {"fps_640", "approximately 24 FPS at 640x640"},
          {"audio", "approximately 0.05 s for 5 s of audio to 0.25 s for 25 s"},
          {"replacement", "0.06 s at 25 landmarks to approximately 0.48 s at 200 landmarks"},
          {"thresholds", "24 FPS (cinematic) and 30 FPS (broadcast)"}};
}

std::string records_csv(const std::vector<BenchRecord>& records) {
  std::ostringstream os;
  os.precision(10);
  os << "knob,value,component,wall_ms,repeat\n";
  for (const BenchRecord& r : records) {
    for (std::size_t i = 0; i < r.samples.size(); ++i) {
      os << r.knob << ',' << r.value << ',' << r.component << ',' << r.samples[i] << ',' << i << '\n';
    }
  }
  return os.str();
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Series {
  std::string name;
  std::string color;
  std::vector<std::pair<double, double>> points;
  const ScalingFit* fit = nullptr;
};

struct HLine {
  std::string id;
  double y;
  std::string label;
};

std::string svg_panel(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                      const std::vector<Series>& series, const std::vector<HLine>& lines,
                      const std::map<std::string, std::string>& meta) {
  constexpr double W = 640, H = 420, L = 70, R = 20, T = 40, B = 60;
  double xmin = 1e300, xmax = -1e300, ymin = 0.0, ymax = -1e300;
  for (const Series& s : series) {
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymax = std::max(ymax, y);
    }
  }
  for (const HLine& l : lines) ymax = std::max(ymax, l.y);
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  ymax *= 1.1;
  auto sx = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto sy = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\">\n<metadata>\n";
  for (const auto& [k, v] : meta) os << "  <context key=\"" << xml_escape(k) << "\">" << xml_escape(v) << "</context>\n";
  os << "</metadata>\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
     << xml_escape(title) << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    const double yv = ymin + (ymax - ymin) * i / 4.0;
    os << "<text x=\"" << sx(xv) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"11\">" << xv << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
       << "font-size=\"11\">" << yv << "</text>\n";
  }
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
     << "font-size=\"13\">" << xml_escape(xlabel) << "</text>\n";
  os << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
     << "transform=\"rotate(-90 16 " << H / 2 << ")\">" << xml_escape(ylabel) << "</text>\n";
  for (const HLine& l : lines) {
    os << "<g id=\"" << l.id << "\"><line x1=\"" << L << "\" y1=\"" << sy(l.y) << "\" x2=\"" << W - R << "\" y2=\""
       << sy(l.y) << "\" stroke=\"#c00\" stroke-dasharray=\"6 4\"/><text x=\"" << W - R - 4 << "\" y=\"" << sy(l.y) - 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#c00\">" << xml_escape(l.label)
       << "</text></g>\n";
  }
  int legend = 0;
  for (const Series& s : series) {
    if (s.fit != nullptr) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      for (int i = 0; i <= 50; ++i) {
        const double x = xmin + (xmax - xmin) * i / 50.0;
        const double y = std::clamp(s.fit->predict(x), ymin, ymax);
        os << sx(x) << ',' << sy(y) << ' ';
      }
      os << "\"/>\n";
    }
    for (const auto& [x, y] : s.points) {
      os << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"3.5\" fill=\"" << s.color << "\"/>\n";
    }
    os << "<text x=\"" << L + 10 << "\" y=\"" << T + 14 + 16 * legend++ << "\" font-family=\"sans-serif\" "
       << "font-size=\"12\" fill=\"" << s.color << "\">" << xml_escape(s.name);
    if (s.fit != nullptr && s.fit->model == FitModel::power) {
      os << " (exponent " << s.fit->b << "; pixel-linear 1, reference 2/3; R2 " << s.fit->r2 << ")";
    } else if (s.fit != nullptr) {
      os << " (R2 " << s.fit->r2 << ")";
    }
    os << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

const char* component_color(const std::string& c) {
  if (c == "audio") return "#1f77b4";
  if (c == "rendering") return "#2ca02c";
  if (c == "replacement") return "#9467bd";
  return "#333333";
}

}  // namespace

std::vector<std::string> write_report(const std::vector<BenchRecord>& records, const std::vector<PanelFit>& fits,
                                      const std::string& out_dir) {
  if (records.empty()) fail(ErrorCode::no_records, "no records to report");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) fail(ErrorCode::unwritable_path, out_dir);

  std::map<std::string, std::string> meta = reference_context();
  meta["machine"] = records.front().fingerprint;
  std::set<std::string> knobs;
  for (const BenchRecord& r : records) knobs.insert(r.knob);
  std::vector<std::string> written;
  for (const std::string& knob : knobs) {
    std::vector<BenchRecord> subset;
    for (const BenchRecord& r : records) {
      if (r.knob == knob) subset.push_back(r);
    }
    const std::string csv = out_dir + "/" + knob + ".csv";
    io::write_text_file(csv, records_csv(subset));
    written.push_back(csv);

    std::vector<Series> series;
    for (const char* c : {"audio", "rendering", "replacement", "total"}) {
      Series s{c, component_color(c), {}, nullptr};
      for (const BenchRecord& r : subset) {
        if (r.component == c && r.valid) s.points.emplace_back(knob == "resolution" ? r.value * r.value : r.value, r.wall_ms);
      }
      for (const PanelFit& f : fits) {
        if (f.knob == knob && f.component == c) s.fit = &f.fit;
      }
      if (!s.points.empty()) series.push_back(s);
    }
    const std::string xlabel = knob == "resolution" ? "pixels (side^2)" : knob;
    const std::string svg = out_dir + "/" + knob + ".svg";
    io::write_text_file(svg, svg_panel("wall time vs " + knob, xlabel, "ms", series, {}, meta));
    written.push_back(svg);

    if (knob == "resolution") {
      // FPS of the per-frame path (render + replacement) against side length.
      std::map<double, double> per_frame;
      for (const BenchRecord& r : subset) {
        if (r.component == "rendering" || r.component == "replacement") per_frame[r.value] += r.wall_ms;
      }
      Series fps{"render + replacement", "#2ca02c", {}, nullptr};
      for (const auto& [side, ms] : per_frame) fps.points.emplace_back(side, 1000.0 / ms);
      const std::string path = out_dir + "/fps.svg";
      io::write_text_file(path, svg_panel("frames per second vs resolution", "side length (pixels)", "FPS", {fps},
                                          {{"fps-24", 24.0, "24 FPS"}, {"fps-30", 30.0, "30 FPS"}}, meta));
      written.push_back(path);
    }
  }
  if (!fits.empty()) {
    std::ostringstream os;
    os.precision(10);
    os << "knob,component,model,a,b,r2,residual_max,points\n";
    for (const PanelFit& f : fits) {
      const char* model = f.fit.model == FitModel::affine ? "affine" : f.fit.model == FitModel::power ? "power" : "inverse";
      os << f.knob << ',' << f.component << ',' << model << ',' << f.fit.a << ',' << f.fit.b << ',' << f.fit.r2 << ','
         << f.fit.residual_max << ',' << f.fit.points << '\n';
    }
    const std::string path = out_dir + "/fits.csv";
    io::write_text_file(path, os.str());
    written.push_back(path);
  }
  return written;
}

}  // namespace trihead
