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
#include <string>

#include "unitgrade/codegen.hpp"
#include "unitgrade/config.hpp"

namespace unitgrade {

inline constexpr std::string_view kUnitTestingType = "unit-testing";

struct Manifest {
  std::string task_id;
  std::string task_type;
  std::string language;
  std::string created_at;     // RFC 3339 UTC with microseconds
  std::string config_digest;  // lowercase hex SHA-256 of the canonical config

  bool operator==(const Manifest&) const = default;
};

nlohmann::ordered_json to_json(const Manifest& m);
Manifest manifest_from_json(const nlohmann::json& doc);

/// A compiled exercise as loaded from the task store.
struct TaskPackage {
  std::filesystem::path dir;
  Manifest manifest;
  TaskConfig config;
  CodeTemplate student_template;
  std::string teacher_source;

  const std::string& task_id() const noexcept { return manifest.task_id; }
  const std::string& language() const noexcept { return manifest.language; }
  const FunctionSpec& spec() const noexcept { return config.spec; }
  const TestPlan& plan() const noexcept { return config.test; }
};

/// Canonical config text: keys sorted, no whitespace. Hashing input for
/// Manifest::config_digest.
std::string canonical_config(const TaskConfig& config);
std::string config_digest(const TaskConfig& config);

}  // namespace unitgrade
