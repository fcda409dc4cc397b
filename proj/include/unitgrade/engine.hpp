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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "unitgrade/grading.hpp"
#include "unitgrade/taskstore.hpp"

namespace unitgrade {

struct EngineOptions {
  std::filesystem::path task_dir;
  GradingOptions grading;
  Limits smoke_limits{std::chrono::duration<double>(10.0)};
};

/// Deployment settings from the environment:
///   GRADER_TASK_DIR       task store root (default ./tasks)
///   GRADER_SCRATCH_DIR    scratch root (default system temp dir)
///   GRADER_KEEP_SCRATCH   "1" keeps scratch directories for debugging
///   GRADER_PYTHON         interpreter override (default python3 on PATH)
///   GRADER_WALL_TIME      per-phase wall clock in seconds (default 30)
///   GRADER_PER_TEST_TIME  per-test limit in seconds (default 1)
EngineOptions engine_options_from_env();

/// Task store plus grading settings; shared by the CLI and the HTTP API.
class Engine {
 public:
  explicit Engine(EngineOptions options);

  TaskStore& store() noexcept { return store_; }
  const TaskStore& store() const noexcept { return store_; }
  const GradingOptions& grading() const noexcept { return options_.grading; }

  Manifest create(std::string_view task_type, std::string_view language, const TaskConfig& config,
                  const std::optional<std::string>& requested_id = std::nullopt);

  /// Loads the task (NotFound propagates) and grades the raw inner input.
  GradeReport grade(std::string_view task_id, std::string_view raw_input,
                    std::optional<std::uint64_t> seed = std::nullopt) const;

 private:
  EngineOptions options_;
  TaskStore store_;
};

}  // namespace unitgrade
