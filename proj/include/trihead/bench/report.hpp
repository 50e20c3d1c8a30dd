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

#include <map>
#include <string>
#include <vector>

#include "trihead/bench/scaling.hpp"

namespace trihead {

/// A fit to draw on a knob's panel.
struct PanelFit {
  std::string knob;
  std::string component;
  ScalingFit fit;
};

/// Published reference figures recorded next to the measurements; not compared.
std::map<std::string, std::string> reference_context();

/// Writes <out>/<knob>.csv (knob,value,component,wall_ms,repeat; one row per repeat)
/// and <out>/<knob>.svg for every knob present, plus <out>/fps.svg with 24 and 30 FPS
/// lines when resolution records exist, and <out>/fits.csv when fits are given.
/// Throws no_records on empty input before touching the filesystem.
std::vector<std::string> write_report(const std::vector<BenchRecord>& records, const std::vector<PanelFit>& fits,
                                      const std::string& out_dir);

std::string records_csv(const std::vector<BenchRecord>& records);

}  // namespace trihead
