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

#include "unitgrade/engine.hpp"

#include <cstdlib>
#include <stdexcept>

#include "unitgrade/errors.hpp"

namespace unitgrade {

namespace {

std::optional<double> env_seconds(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  double d = std::strtod(v, &end);
  if (end == v || *end != '\0' || !(d > 0)) {
    throw std::invalid_argument(std::string(name) + " must be a positive number of seconds");
  }
  return d;
}

}  // namespace

EngineOptions engine_options_from_env() {
  EngineOptions o;
  o.task_dir = default_task_root();
  o.grading.scratch.root = default_scratch_root();
  const char* keep = std::getenv("GRADER_KEEP_SCRATCH");
  o.grading.scratch.keep = keep && std::string_view(keep) == "1";
  o.grading.runner.interpreter = resolve_runtime("python");
  if (auto wall = env_seconds("GRADER_WALL_TIME")) {
    o.grading.limits.wall_time = std::chrono::duration<double>(*wall);
  }
  if (auto per_test = env_seconds("GRADER_PER_TEST_TIME")) o.grading.runner.per_test_time = *per_test;
  return o;
}

Engine::Engine(EngineOptions options)
    : options_(std::move(options)),
      store_(TaskStore::Options{options_.task_dir, options_.smoke_limits, options_.grading.runner,
                                options_.grading.scratch}) {}

Manifest Engine::create(std::string_view task_type, std::string_view language,
                        const TaskConfig& config, const std::optional<std::string>& requested_id) {
  return store_.create_task(task_type, language, config, requested_id);
}

GradeReport Engine::grade(std::string_view task_id, std::string_view raw_input,
                          std::optional<std::uint64_t> seed) const {
  auto task = store_.load_task(task_id);
  auto options = options_.grading;
  if (seed) options.seed = seed;
  return grade_input(task, raw_input, options);
}

}  // namespace unitgrade
