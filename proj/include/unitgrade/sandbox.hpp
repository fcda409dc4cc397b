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

#include <sys/types.h>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unitgrade/package.hpp"

namespace unitgrade {

struct Limits {
  std::chrono::duration<double> wall_time{30.0};
  std::uint64_t memory = 512ULL << 20;
  std::uint64_t output_bytes = 16384;
  std::uint64_t max_processes = 16;
  std::uint64_t file_bytes = 64ULL << 20;

  /// Throws std::invalid_argument unless every limit is strictly positive.
  void validate() const;
};

enum class SandboxStatus { Completed, Timeout, Overflow };

std::string_view to_string(SandboxStatus status) noexcept;

struct SandboxOutcome {
  SandboxStatus status = SandboxStatus::Completed;
  int exit_code = 0;    // 128 + signal when killed by a signal
  int term_signal = 0;  // 0 when the child exited normally
  std::string stdout_bytes;
  std::string stderr_bytes;
  double duration = 0;  // seconds
};

/// How the child is confined beyond resource limits. Each layer is applied
/// when the host supports it; `report()` tells which ones took effect.
struct Isolation {
  /// Directories the child may read and execute from; everything else
  /// outside the working directory is invisible when Landlock is available.
  std::vector<std::filesystem::path> read_only_paths = {"/usr", "/lib", "/lib64", "/lib32",
                                                        "/bin", "/sbin", "/etc", "/proc",
                                                        "/dev"};
  bool landlock = true;
  bool network_namespace = true;
  /// Identity to drop to when the grader runs as root.
  uid_t uid = 65534;
  gid_t gid = 65534;
};

/// Which confinement layers this host can apply.
struct IsolationSupport {
  int landlock_abi = 0;  // 0: unavailable
  bool can_drop_privileges = false;
};

IsolationSupport probe_isolation() noexcept;

/// Run `command` (argv[0] must be an absolute path) in `workdir` under
/// `limits`. Precondition: workdir holds exactly `visible_files`. Throws
/// SetupError when the child cannot be started; child failures come back as a
/// Completed outcome with a nonzero exit code.
SandboxOutcome execute(std::span<const std::string> command, const std::filesystem::path& workdir,
                       const Limits& limits, std::span<const std::string> visible_files,
                       const Isolation& isolation = {});

enum class Phase { Student, Teacher };

std::string_view to_string(Phase phase) noexcept;

struct ScratchFile {
  std::string name;
  std::string content;
};

struct ScratchOptions {
  std::filesystem::path root;  // empty: GRADER_SCRATCH_DIR or the system temp dir
  bool keep = false;
  Isolation isolation;
};

/// Owns a scratch directory; removes it on destruction unless kept.
class ScratchDir {
 public:
  ScratchDir(std::filesystem::path path, bool keep) : path_(std::move(path)), keep_(keep) {}
  ScratchDir(ScratchDir&& other) noexcept;
  ScratchDir& operator=(ScratchDir&& other) noexcept;
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  ~ScratchDir();

  const std::filesystem::path& path() const noexcept { return path_; }
  /// Names of the files placed in the directory, sorted.
  std::vector<std::string> files() const;
  std::string read(std::string_view name) const;

 private:
  std::filesystem::path path_;
  bool keep_ = false;
};

/// Fresh per-phase directory holding the phase's source, the runner harness,
/// spec.json and `inputs`. Student directories never receive the teacher
/// source, solution.json or test.json; supplying one of those names for the
/// student phase is a SetupError.
ScratchDir make_scratch(const TaskPackage& task, Phase phase, std::span<const ScratchFile> inputs,
                        const ScratchOptions& options = {});

/// Plain directory under the scratch root, for grader-private files.
ScratchDir make_private_dir(const ScratchOptions& options, std::string_view prefix);

std::filesystem::path default_scratch_root();

}  // namespace unitgrade
