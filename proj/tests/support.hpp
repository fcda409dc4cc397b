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

#include <stdlib.h>
#include <sys/stat.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "unitgrade/engine.hpp"

#ifndef UNITGRADE_FIXTURE_DIR
#error "UNITGRADE_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace unitgrade::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(UNITGRADE_FIXTURE_DIR) + "/" + name;
}

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Removed on destruction. Mode 0711 so sandboxed children can traverse it.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "ugtest-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
    ::chmod(tmpl.c_str(), 0711);
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline EngineOptions engine_options(const TempDir& dir) {
  EngineOptions o;
  o.task_dir = dir.path() / "tasks";
  o.grading.scratch.root = dir.path() / "scratch";
  o.grading.runner.interpreter = resolve_runtime("python");
  o.grading.limits.wall_time = std::chrono::duration<double>(20.0);
  return o;
}

inline TaskConfig sub_config() { return parse_task_config(read_fixture("sub_task.json")); }

/// Run a python3 script outside any sandbox and return its stdout. Used by
/// oracles that must not share code paths with the engine.
inline std::string run_python(const std::string& script) {
  TempDir dir;
  auto path = dir.path() / "oracle.py";
  {
    std::ofstream out(path);
    out << script;
  }
  std::string cmd = "python3 " + path.string();
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  std::string out;
  char buf[4096];
  while (auto n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  if (::pclose(pipe) != 0) throw std::runtime_error("oracle script failed:\n" + script);
  return out;
}

}  // namespace unitgrade::testing
