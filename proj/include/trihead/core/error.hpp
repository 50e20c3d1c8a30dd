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

#include <stdexcept>
#include <string>
#include <string_view>

namespace trihead {

/// Fine-grained failure causes. Each maps onto one process exit category.
enum class ErrorCode {
  usage,
  missing_file,
  unwritable_path,
  bad_magic,
  unsupported_version,
  truncated_payload,
  checksum_mismatch,
  malformed,
  dimension_mismatch,
  invalid_argument,
  non_finite,
  divergence,
  empty_audio,
  keypoints_required,
  degenerate_landmarks,
  no_records,
};

/// Exit codes documented in `trihead --help`.
enum class ExitCode : int {
  ok = 0,
  failure = 1,
  usage = 2,
  missing_file = 3,
  version_mismatch = 4,
  format = 5,
  dimension = 6,
  numeric = 7,
  io = 8,
  input = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  ExitCode exit_code() const noexcept;

 private:
  ErrorCode code_;
};

std::string_view error_code_name(ErrorCode code);
ExitCode exit_code_for(ErrorCode code);

[[noreturn]] void fail(ErrorCode code, const std::string& message);

/// Throws dimension_mismatch naming `what`, the expected and the actual size.
void require_size(std::string_view what, std::size_t expected, std::size_t actual);

}  // namespace trihead
