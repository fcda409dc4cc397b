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

#include "unitgrade/runner.hpp"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "unitgrade/codegen.hpp"
#include "unitgrade/errors.hpp"

namespace fs = std::filesystem;

namespace unitgrade {

std::string runner_source_name(Phase phase, std::string_view language) {
  return std::string(to_string(phase)) + "." + source_extension(language);
}

std::string resolve_runtime(std::string_view language) {
  if (!is_supported_language(language)) throw UnsupportedLanguage(std::string(language));
  std::error_code ec;
  if (const char* env = std::getenv("GRADER_PYTHON"); env && *env) {
    auto p = fs::canonical(env, ec);
    if (ec) throw SetupError(std::string("GRADER_PYTHON=") + env + " does not exist");
    return p.string();
  }
  const char* path = std::getenv("PATH");
  std::istringstream dirs(path ? path : "/usr/local/bin:/usr/bin:/bin");
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) continue;
    auto candidate = fs::path(dir) / "python3";
    if (::access(candidate.c_str(), X_OK) == 0) {
      auto p = fs::canonical(candidate, ec);
      if (!ec) return p.string();
    }
  }
  throw SetupError("no python3 interpreter found on PATH");
}

std::vector<std::string> harness_command(const RunnerOptions& options, Phase phase,
                                         std::string_view language) {
  std::ostringstream per_test;
  per_test << options.per_test_time;
  auto out = phase == Phase::Student ? kDataRes : kSolutionRes;
  return {options.interpreter,
          "-I",
          "-B",
          std::string(kHarnessFile),
          "--source",
          runner_source_name(phase, language),
          "--spec",
          "spec.json",
          "--csv",
          std::string(kDataCsv),
          "--out",
          std::string(out),
          "--mode",
          std::string(to_string(phase)),
          "--per-test-time",
          per_test.str()};
}

}  // namespace unitgrade
