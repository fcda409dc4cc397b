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

#include "unitgrade/taskstore.hpp"

#include <fcntl.h>
#include <stdio.h>
#include <stdlib.h>
#include <sys/stat.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>
#include <tuple>

#include "unitgrade/codegen.hpp"
#include "unitgrade/errors.hpp"

namespace fs = std::filesystem;

namespace unitgrade {

namespace {

constexpr const char* kManifestFile = "manifest.json";
constexpr const char* kSpecFile = "spec.json";
constexpr const char* kTestFile = "test.json";
constexpr const char* kSolutionFile = "solution.json";
constexpr const char* kTemplateFile = "template.txt";

std::string now_rfc3339() {
  auto now = std::chrono::system_clock::now();
  auto secs = std::chrono::system_clock::to_time_t(now);
  auto micros = std::chrono::duration_cast<std::chrono::microseconds>(now.time_since_epoch()) %
                std::chrono::seconds(1);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[80];
  std::snprintf(out, sizeof out, "%s.%06lldZ", buf, static_cast<long long>(micros.count()));
  return out;
}

std::string random_id() {
  std::random_device rd;
  std::string id;
  for (int i = 0; i < 4; ++i) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(rd()));
    id += buf;
  }
  return id;
}

void write_readonly(const fs::path& path, std::string_view content) {
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("cannot write " + path.string());
  }
  ::chmod(path.c_str(), 0444);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorruptPackage("missing file " + path.filename().string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const fs::path& path) {
  auto text = read_file(path);
  auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw CorruptPackage(path.filename().string() + " is not valid JSON");
  return doc;
}

}  // namespace

bool is_valid_task_id(std::string_view id) noexcept {
  if (id.empty() || id.size() > 128 || id.front() == '.') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-' || c == '.';
  });
}

fs::path default_task_root() {
  if (const char* env = std::getenv("GRADER_TASK_DIR"); env && *env) return env;
  return "tasks";
}

TaskStore::TaskStore(Options options) : options_(std::move(options)) {
  if (options_.root.empty()) options_.root = default_task_root();
  std::error_code ec;
  if (!fs::exists(options_.root, ec)) {
    fs::create_directories(options_.root, ec);
    if (ec) {
      throw SetupError("cannot create task store " + options_.root.string() + ": " + ec.message());
    }
    // Sandboxed code runs as another user and must not see packages.
    ::chmod(options_.root.c_str(), 0700);
  }
}

void TaskStore::smoke_load(const TaskPackage& package) const {
  std::vector<ScratchFile> inputs{{"data.csv", ""}};
  auto scratch = make_scratch(package, Phase::Teacher, inputs, options_.scratch);
  auto cmd = harness_command(options_.runner, Phase::Teacher, package.language());
  auto run = execute(cmd, scratch.path(), options_.smoke_limits, scratch.files(),
                     options_.scratch.isolation);
  auto res = scratch.read(kSolutionRes);
  if (res.starts_with("load-error:")) {
    auto diag = res.substr(std::strlen("load-error:"));
    if (auto nl = diag.find('\n'); nl != std::string::npos) diag.resize(nl);
    throw SolutionLoadError("solution does not load: " + diag);
  }
  if (run.status != SandboxStatus::Completed || run.exit_code != 0) {
    throw SolutionLoadError("solution smoke run ended with " + std::string(to_string(run.status)) +
                            ", exit code " + std::to_string(run.exit_code));
  }
}

Manifest TaskStore::create_task(std::string_view task_type, std::string_view language,
                                const TaskConfig& config,
                                const std::optional<std::string>& requested_id) {
  if (task_type != kUnitTestingType) throw UnsupportedType(std::string(task_type));
  if (!is_supported_language(language)) throw UnsupportedLanguage(std::string(language));

  std::string id;
  if (requested_id) {
    if (!is_valid_task_id(*requested_id)) {
      throw SchemaError("id", "task id must match [A-Za-z0-9_.-]{1,128} and not start with '.'");
    }
    id = *requested_id;
    if (fs::exists(options_.root / id)) throw DuplicateId(id);
  } else {
    id = random_id();
  }

  TaskPackage package;
  package.config = config;
  package.student_template = make_template(config.spec, language);
  package.teacher_source = fill_template(package.student_template, config.solution.fields);
  package.manifest = Manifest{id, std::string(task_type), std::string(language), now_rfc3339(),
                              config_digest(config)};

  smoke_load(package);

  std::string staging = (options_.root / ".staging-XXXXXX").string();
  if (::mkdtemp(staging.data()) == nullptr) {
    throw SetupError("cannot create staging directory: " + std::string(std::strerror(errno)));
  }
  try {
    fs::path dir = staging;
    write_readonly(dir / kManifestFile, to_json(package.manifest).dump(2) + "\n");
    write_readonly(dir / kSpecFile, to_json(config.spec).dump(2) + "\n");
    write_readonly(dir / kTestFile, to_json(config.test).dump(2) + "\n");
    write_readonly(dir / kSolutionFile, to_json(config.solution).dump(2) + "\n");
    write_readonly(dir / kTemplateFile, package.student_template.skeleton);
    write_readonly(dir / runner_source_name(Phase::Teacher, language), package.teacher_source);
    ::chmod(staging.c_str(), 0755);

    auto target = (options_.root / id).string();
    if (::renameat2(AT_FDCWD, staging.c_str(), AT_FDCWD, target.c_str(), RENAME_NOREPLACE) != 0) {
      int err = errno;
      if (err == EEXIST || err == ENOTEMPTY) throw DuplicateId(id);
      throw SetupError("cannot publish task " + id + ": " + std::strerror(err));
    }
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    throw;
  }
  return package.manifest;
}

TaskPackage TaskStore::load_task(std::string_view task_id) const {
  if (!is_valid_task_id(task_id)) throw NotFound(std::string(task_id));
  fs::path dir = options_.root / task_id;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw NotFound(std::string(task_id));

  TaskPackage package;
  package.dir = dir;
  package.manifest = manifest_from_json(read_json(dir / kManifestFile));
  if (package.manifest.task_id != task_id) {
    throw CorruptPackage("manifest names task '" + package.manifest.task_id + "'");
  }
  try {
    package.config.spec = parse_function_spec(read_json(dir / kSpecFile));
    package.config.test = parse_test_plan(read_json(dir / kTestFile), package.config.spec);
    package.config.solution = parse_solution(read_json(dir / kSolutionFile));
    package.student_template = parse_template(package.manifest.language, read_file(dir / kTemplateFile));
  } catch (const SchemaError& e) {
    throw CorruptPackage(std::string("invalid package content: ") + e.what());
  } catch (const UnsupportedLanguage& e) {
    throw CorruptPackage(e.what());
  }
  package.teacher_source =
      read_file(dir / runner_source_name(Phase::Teacher, package.manifest.language));

  if (config_digest(package.config) != package.manifest.config_digest) {
    throw CorruptPackage("config digest mismatch for task '" + std::string(task_id) + "'");
  }
  if (fill_template(package.student_template, package.config.solution.fields) !=
      package.teacher_source) {
    throw CorruptPackage("teacher source does not match template and solution");
  }
  return package;
}

std::vector<Manifest> TaskStore::list_tasks() const {
  std::vector<Manifest> out;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(options_.root, ec)) {
    auto name = entry.path().filename().string();
    if (name.starts_with('.') || !entry.is_directory()) continue;
    try {
      out.push_back(manifest_from_json(read_json(entry.path() / kManifestFile)));
    } catch (const CorruptPackage&) {
      // Unreadable entries are reported by load_task, not listed.
    }
  }
  std::sort(out.begin(), out.end(), [](const Manifest& a, const Manifest& b) {
    return std::tie(a.created_at, a.task_id) < std::tie(b.created_at, b.task_id);
  });
  return out;
}

}  // namespace unitgrade
