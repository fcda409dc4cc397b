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
#include <vector>

#include "unitgrade/package.hpp"
#include "unitgrade/runner.hpp"
#include "unitgrade/sandbox.hpp"

namespace unitgrade {

/// Task ids double as directory names: [A-Za-z0-9_.-]{1,128}, not starting
/// with '.'.
bool is_valid_task_id(std::string_view id) noexcept;

/// Directory-per-task store. Packages are written once through a staging
/// directory and an atomic no-replace rename, then only ever read.
///
/// Layout of <root>/<task_id>/:
///   manifest.json  spec.json  test.json  solution.json  template.txt  teacher.<ext>
class TaskStore {
 public:
  struct Options {
    std::filesystem::path root;
    Limits smoke_limits;
    RunnerOptions runner;
    ScratchOptions scratch;
  };

  explicit TaskStore(Options options);

  const std::filesystem::path& root() const noexcept { return options_.root; }

  /// Compile `config` into a new package. Throws UnsupportedType,
  /// UnsupportedLanguage, SchemaError (bad requested id), DuplicateId,
  /// SolutionLoadError.
  Manifest create_task(std::string_view task_type, std::string_view language,
                       const TaskConfig& config,
                       const std::optional<std::string>& requested_id = std::nullopt);

  /// Throws NotFound or CorruptPackage.
  TaskPackage load_task(std::string_view task_id) const;

  /// Sorted by created_at, then task_id.
  std::vector<Manifest> list_tasks() const;

 private:
  void smoke_load(const TaskPackage& package) const;

  Options options_;
};

/// GRADER_TASK_DIR, or ./tasks.
std::filesystem::path default_task_root();

}  // namespace unitgrade
