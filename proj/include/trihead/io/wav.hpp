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
#include <vector>

#include "trihead/conditioning/audio.hpp"

namespace trihead::io {

/// RIFF/WAVE with 16-bit PCM or 32-bit float samples. Channels are averaged to mono.
AudioTrack decode_wav(const std::vector<char>& bytes, const std::string& what = "wav");
AudioTrack read_wav(const std::string& path);

/// Mono 16-bit PCM, samples clamped to [-1, 1].
std::vector<char> encode_wav(const AudioTrack& track);
void write_wav(const std::string& path, const AudioTrack& track);

}  // namespace trihead::io
