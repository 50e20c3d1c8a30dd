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

#include <ostream>
#include <string>
#include <vector>

namespace trihead {

struct SelftestResult {
  std::string module;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Closed-form examples from every module, each run in isolation.
std::vector<SelftestResult> run_selftest();

/// One line per check, then a summary. Returns true when every check passed.
bool print_selftest(const std::vector<SelftestResult>& results, std::ostream& os);

}  // namespace trihead
