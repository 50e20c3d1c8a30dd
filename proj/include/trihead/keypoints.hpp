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

#include <vector>

#include "trihead/core/types.hpp"

namespace trihead {

/// L landmarks in normalized image coordinates: u = x / width, v = y / height, both in
/// [0, 1], with (0, 0) the top-left image corner.
struct KeypointSet {
  std::vector<Vec2> points;

  std::size_t size() const { return points.size(); }
  bool operator==(const KeypointSet&) const = default;
};

}  // namespace trihead
