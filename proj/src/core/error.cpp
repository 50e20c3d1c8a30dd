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

#include "trihead/core/error.hpp"

namespace trihead {

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

ExitCode Error::exit_code() const noexcept { return exit_code_for(code_); }

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::usage: return "usage";
    case ErrorCode::missing_file: return "missing file";
    case ErrorCode::unwritable_path: return "unwritable path";
    case ErrorCode::bad_magic: return "bad magic";
    case ErrorCode::unsupported_version: return "version mismatch";
    case ErrorCode::truncated_payload: return "truncated payload";
    case ErrorCode::checksum_mismatch: return "checksum failure";
    case ErrorCode::malformed: return "malformed file";
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::non_finite: return "non-finite value";
    case ErrorCode::divergence: return "divergence";
    case ErrorCode::empty_audio: return "empty audio";
    case ErrorCode::keypoints_required: return "keypoints required";
    case ErrorCode::degenerate_landmarks: return "degenerate landmarks";
    case ErrorCode::no_records: return "no records";
  }
  return "unknown";
}

ExitCode exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::usage:
    case ErrorCode::invalid_argument: return ExitCode::usage;
    case ErrorCode::missing_file: return ExitCode::missing_file;
    case ErrorCode::unsupported_version: return ExitCode::version_mismatch;
    case ErrorCode::bad_magic:
    case ErrorCode::truncated_payload:
    case ErrorCode::checksum_mismatch:
    case ErrorCode::malformed: return ExitCode::format;
    case ErrorCode::dimension_mismatch: return ExitCode::dimension;
    case ErrorCode::non_finite:
    case ErrorCode::divergence: return ExitCode::numeric;
    case ErrorCode::unwritable_path: return ExitCode::io;
    case ErrorCode::empty_audio:
    case ErrorCode::keypoints_required:
    case ErrorCode::degenerate_landmarks:
    case ErrorCode::no_records: return ExitCode::input;
  }
  return ExitCode::failure;
}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

void require_size(std::string_view what, std::size_t expected, std::size_t actual) {
  if (expected != actual) {
    fail(ErrorCode::dimension_mismatch, std::string(what) + ": expected " +
                                            std::to_string(expected) + ", got " +
                                            std::to_string(actual));
  }
}

}  // namespace trihead
