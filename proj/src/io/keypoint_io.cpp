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

#include "trihead/io/keypoint_io.hpp"

#include <cmath>
#include <sstream>

#include "trihead/core/error.hpp"
#include "trihead/io/binary.hpp"

namespace trihead::io {

std::string format_keypoints(const KeypointSet& kp) {
  std::ostringstream os;
  os.precision(17);
  os << kp.size() << '\n';
  for (const Vec2& p : kp.points) os << p.x() << ' ' << p.y() << '\n';
  return os.str();
}

KeypointSet parse_keypoints(const std::string& text, const std::string& what) {
  std::istringstream is(text);
  long count = -1;
  if (!(is >> count) || count <= 0) fail(ErrorCode::malformed, what + ": first line must be a positive count");
  KeypointSet kp;
  kp.points.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    double u = 0.0, v = 0.0;
    if (!(is >> u >> v)) fail(ErrorCode::truncated_payload, what + ": expected " + std::to_string(count) + " points");
    if (!std::isfinite(u) || !std::isfinite(v)) fail(ErrorCode::non_finite, what + ": keypoint is not finite");
    kp.points.emplace_back(u, v);
  }
  std::string extra;
  if (is >> extra) fail(ErrorCode::malformed, what + ": trailing data after " + std::to_string(count) + " points");
  return kp;
}

void write_keypoints(const std::string& path, const KeypointSet& kp) { write_text_file(path, format_keypoints(kp)); }

KeypointSet read_keypoints(const std::string& path) {
  const std::vector<char> bytes = read_file(path);
  return parse_keypoints(std::string(bytes.begin(), bytes.end()), path);
}

}  // namespace trihead::io
