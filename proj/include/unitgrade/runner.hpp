// Copyright 2026 The unitgrade Authors
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
#include <string_view>
#include <vector>

#include "unitgrade/sandbox.hpp"

namespace unitgrade {

// Interface to the in-sandbox test harness. The harness reads data.csv,
// calls the filled function once per row and writes one result line per row.

inline constexpr std::string_view kHarnessFile = "harness.py";
inline constexpr std::string_view kDataCsv = "data.csv";
inline constexpr std::string_view kDataRes = "data.res";
inline constexpr std::string_view kSolutionRes = "solution.res";

/// Embedded harness source copied into every scratch directory.
std::string_view harness_source() noexcept;

/// "student.py" / "teacher.py" for python.
std::string runner_source_name(Phase phase, std::string_view language);

/// Interpreter for `language`: GRADER_PYTHON if set, else python3 from PATH,
/// resolved to an absolute path. Throws UnsupportedLanguage / SetupError.
std::string resolve_runtime(std::string_view language);

struct RunnerOptions {
  std::string interpreter;
  double per_test_time = 1.0;  // seconds
};

/// argv for one harness run inside a scratch directory.
std::vector<std::string> harness_command(const RunnerOptions& options, Phase phase,
                                         std::string_view language);

}  // namespace unitgrade
