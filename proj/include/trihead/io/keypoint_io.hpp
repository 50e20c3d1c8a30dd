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

#include <string>

#include "trihead/keypoints.hpp"

namespace trihead::io {

/// Text: first line L, then L lines "u v" with 17 significant digits.
std::string format_keypoints(const KeypointSet& kp);
KeypointSet parse_keypoints(const std::string& text, const std::string& what = "keypoints");

void write_keypoints(const std::string& path, const KeypointSet& kp);
KeypointSet read_keypoints(const std::string& path);

}  // namespace trihead::io
