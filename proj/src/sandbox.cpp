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

#include "unitgrade/sandbox.hpp"

#include <fcntl.h>
#include <grp.h>
#include <linux/landlock.h>
#include <poll.h>
#include <sched.h>
#include <signal.h>
#include <stdlib.h>
#include <sys/prctl.h>
#include <sys/resource.h>
#include <sys/stat.h>
#include <sys/syscall.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "unitgrade/errors.hpp"
#include "unitgrade/runner.hpp"

// Constants from newer kernel headers than the build host may ship.
#ifndef LANDLOCK_ACCESS_FS_REFER
#define LANDLOCK_ACCESS_FS_REFER (1ULL << 13)
#endif
#ifndef LANDLOCK_ACCESS_FS_TRUNCATE
#define LANDLOCK_ACCESS_FS_TRUNCATE (1ULL << 14)
#endif
#ifndef LANDLOCK_ACCESS_NET_BIND_TCP
#define LANDLOCK_ACCESS_NET_BIND_TCP (1ULL << 0)
#endif
#ifndef LANDLOCK_ACCESS_NET_CONNECT_TCP
#define LANDLOCK_ACCESS_NET_CONNECT_TCP (1ULL << 1)
#endif

namespace fs = std::filesystem;

namespace unitgrade {

void Limits::validate() const {
  if (!(wall_time.count() > 0) || memory == 0 || output_bytes == 0 || max_processes == 0 ||
      file_bytes == 0) {
    throw std::invalid_argument("sandbox limits must be strictly positive");
  }
}

std::string_view to_string(SandboxStatus status) noexcept {
  switch (status) {
    case SandboxStatus::Completed:
      return "completed";
    case SandboxStatus::Timeout:
      return "timeout";
    case SandboxStatus::Overflow:
      return "overflow";
  }
  return "completed";
}

std::string_view to_string(Phase phase) noexcept {
  return phase == Phase::Student ? "student" : "teacher";
}

namespace {

// ---------------------------------------------------------------------------
// Landlock

struct RulesetAttr {
  std::uint64_t handled_access_fs;
  std::uint64_t handled_access_net;
};

struct PathBeneathAttr {
  std::uint64_t allowed_access;
  std::int32_t parent_fd;
} __attribute__((packed));

constexpr std::uint64_t kFsV1 = (1ULL << 13) - 1;
constexpr std::uint64_t kFileRights = LANDLOCK_ACCESS_FS_EXECUTE | LANDLOCK_ACCESS_FS_WRITE_FILE |
                                      LANDLOCK_ACCESS_FS_READ_FILE | LANDLOCK_ACCESS_FS_TRUNCATE;
constexpr std::uint64_t kReadExec =
    LANDLOCK_ACCESS_FS_EXECUTE | LANDLOCK_ACCESS_FS_READ_FILE | LANDLOCK_ACCESS_FS_READ_DIR;

int landlock_abi() noexcept {
  long abi = syscall(SYS_landlock_create_ruleset, nullptr, 0, LANDLOCK_CREATE_RULESET_VERSION);
  return abi < 0 ? 0 : static_cast<int>(abi);
}

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(Fd&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Fd& operator=(Fd&& o) noexcept {
    reset();
    fd_ = std::exchange(o.fd_, -1);
    return *this;
  }
  ~Fd() { reset(); }

  int get() const noexcept { return fd_; }
  void reset() noexcept {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

// Builds the ruleset in the parent so the forked child only has to call
// landlock_restrict_self.
Fd build_ruleset(int abi, const fs::path& workdir, const Isolation& iso) {
  std::uint64_t handled = kFsV1;
  if (abi >= 2) handled |= LANDLOCK_ACCESS_FS_REFER;
  if (abi >= 3) handled |= LANDLOCK_ACCESS_FS_TRUNCATE;
  RulesetAttr attr{handled, 0};
  std::size_t attr_size = sizeof(std::uint64_t);
  if (abi >= 4) {
    attr.handled_access_net = LANDLOCK_ACCESS_NET_BIND_TCP | LANDLOCK_ACCESS_NET_CONNECT_TCP;
    attr_size = sizeof(RulesetAttr);
  }
  Fd ruleset(static_cast<int>(syscall(SYS_landlock_create_ruleset, &attr, attr_size, 0)));
  if (ruleset.get() < 0) throw SetupError(std::string("landlock ruleset: ") + std::strerror(errno));

  auto allow = [&](const fs::path& p, std::uint64_t access) {
    Fd target(::open(p.c_str(), O_PATH | O_CLOEXEC));
    if (target.get() < 0) return;  // absent on this host
    struct stat st {};
    if (::fstat(target.get(), &st) != 0) return;
    if (!S_ISDIR(st.st_mode)) access &= kFileRights;
    PathBeneathAttr rule{access & handled, target.get()};
    if (syscall(SYS_landlock_add_rule, ruleset.get(), LANDLOCK_RULE_PATH_BENEATH, &rule, 0) != 0) {
      throw SetupError("landlock rule for " + p.string() + ": " + std::strerror(errno));
    }
  };

  for (const auto& p : iso.read_only_paths) {
    auto access = kReadExec;
    // /dev/null and friends are opened for writing.
    if (p == "/dev") access |= LANDLOCK_ACCESS_FS_WRITE_FILE;
    allow(p, access);
  }
  allow(workdir, handled);
  return ruleset;
}

// ---------------------------------------------------------------------------
// Child side. Only async-signal-safe calls between fork and exec.

enum ChildStage : int { kStageIo = 1, kStageChdir, kStageLimits, kStageIdentity, kStageLandlock, kStageExec };

struct ChildFailure {
  int stage;
  int err;
};

[[noreturn]] void child_fail(int report_fd, int stage) {
  ChildFailure f{stage, errno};
  [[maybe_unused]] auto n = ::write(report_fd, &f, sizeof f);
  _exit(127);
}

struct ChildPlan {
  const char* workdir;
  char* const* argv;
  char* const* envp;
  int out_w;
  int err_w;
  int report_w;
  int ruleset_fd;
  bool drop_identity;
  uid_t uid;
  gid_t gid;
  bool netns;
  rlimit as, cpu, nproc, fsize, core, nofile;
};

[[noreturn]] void run_child(const ChildPlan& plan) {
  ::setpgid(0, 0);
  int devnull = ::open("/dev/null", O_RDONLY);
  if (devnull < 0 || ::dup2(devnull, 0) < 0 || ::dup2(plan.out_w, 1) < 0 ||
      ::dup2(plan.err_w, 2) < 0) {
    child_fail(plan.report_w, kStageIo);
  }
  sigset_t none;
  sigemptyset(&none);
  sigprocmask(SIG_SETMASK, &none, nullptr);

  if (plan.netns) {
    // Best effort: unavailable without privileges.
    ::unshare(CLONE_NEWNET);
  }
  if (::chdir(plan.workdir) != 0) child_fail(plan.report_w, kStageChdir);

  if (::setrlimit(RLIMIT_AS, &plan.as) != 0 || ::setrlimit(RLIMIT_CPU, &plan.cpu) != 0 ||
      ::setrlimit(RLIMIT_NPROC, &plan.nproc) != 0 || ::setrlimit(RLIMIT_FSIZE, &plan.fsize) != 0 ||
      ::setrlimit(RLIMIT_CORE, &plan.core) != 0 || ::setrlimit(RLIMIT_NOFILE, &plan.nofile) != 0) {
    child_fail(plan.report_w, kStageLimits);
  }

  if (plan.drop_identity) {
    if (::setgroups(0, nullptr) != 0 || ::setgid(plan.gid) != 0 || ::setuid(plan.uid) != 0) {
      child_fail(plan.report_w, kStageIdentity);
    }
  }

  if (::prctl(PR_SET_NO_NEW_PRIVS, 1, 0, 0, 0) != 0) child_fail(plan.report_w, kStageLandlock);
  if (plan.ruleset_fd >= 0 && syscall(SYS_landlock_restrict_self, plan.ruleset_fd, 0) != 0) {
    child_fail(plan.report_w, kStageLandlock);
  }

  // Nothing inherited past exec except stdio and the CLOEXEC report pipe.
  syscall(SYS_close_range, 3U, ~0U, 4U /* CLOSE_RANGE_CLOEXEC */);

  ::execve(plan.argv[0], plan.argv, plan.envp);
  child_fail(plan.report_w, kStageExec);
}

const char* stage_name(int stage) {
  switch (stage) {
    case kStageIo:
      return "redirecting stdio";
    case kStageChdir:
      return "entering the working directory";
    case kStageLimits:
      return "applying resource limits";
    case kStageIdentity:
      return "dropping privileges";
    case kStageLandlock:
      return "applying filesystem restrictions";
    case kStageExec:
      return "exec";
  }
  return "starting";
}

rlimit both(rlim_t v) { return rlimit{v, v}; }

void check_visible_files(const fs::path& workdir, std::span<const std::string> visible) {
  std::error_code ec;
  if (!fs::is_directory(workdir, ec)) {
    throw SetupError("working directory " + workdir.string() + " does not exist");
  }
  std::set<std::string> present;
  for (const auto& entry : fs::directory_iterator(workdir, ec)) {
    present.insert(entry.path().filename().string());
  }
  std::set<std::string> expected(visible.begin(), visible.end());
  if (present != expected) {
    throw SetupError("working directory " + workdir.string() +
                     " does not hold exactly the visible files");
  }
}

}  // namespace

IsolationSupport probe_isolation() noexcept {
  return IsolationSupport{landlock_abi(), ::geteuid() == 0};
}

SandboxOutcome execute(std::span<const std::string> command, const fs::path& workdir,
                       const Limits& limits, std::span<const std::string> visible_files,
                       const Isolation& isolation) {
  limits.validate();
  if (command.empty() || command.front().empty() || command.front()[0] != '/') {
    throw SetupError("command must start with an absolute executable path");
  }
  check_visible_files(workdir, visible_files);

  std::vector<std::string> env_store = {"PATH=/usr/local/bin:/usr/bin:/bin", "LANG=C.UTF-8",
                                        "LC_ALL=C.UTF-8", "PYTHONDONTWRITEBYTECODE=1",
                                        "HOME=" + workdir.string()};
  std::vector<char*> argv, envp;
  for (const auto& a : command) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);
  for (auto& e : env_store) envp.push_back(e.data());
  envp.push_back(nullptr);

  Fd ruleset;
  if (isolation.landlock) {
    if (int abi = landlock_abi(); abi > 0) ruleset = build_ruleset(abi, workdir, isolation);
  }

  int out_pipe[2], err_pipe[2], report_pipe[2];
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) throw SetupError("pipe failed");
  Fd out_r(out_pipe[0]), out_w(out_pipe[1]);
  if (::pipe2(err_pipe, O_CLOEXEC) != 0) throw SetupError("pipe failed");
  Fd err_r(err_pipe[0]), err_w(err_pipe[1]);
  if (::pipe2(report_pipe, O_CLOEXEC) != 0) throw SetupError("pipe failed");
  Fd report_r(report_pipe[0]), report_w(report_pipe[1]);

  auto wall = limits.wall_time.count();
  auto cpu_seconds = static_cast<rlim_t>(std::ceil(wall)) + 1;
  const std::string workdir_str = workdir.string();
  ChildPlan plan{workdir_str.c_str(),
                 argv.data(),
                 envp.data(),
                 out_w.get(),
                 err_w.get(),
                 report_w.get(),
                 ruleset.get(),
                 ::geteuid() == 0,
                 isolation.uid,
                 isolation.gid,
                 isolation.network_namespace,
                 both(limits.memory),
                 both(cpu_seconds),
                 both(limits.max_processes),
                 both(limits.file_bytes),
                 both(0),
                 both(256)};

  auto start = std::chrono::steady_clock::now();
  pid_t pid = ::fork();
  if (pid < 0) throw SetupError(std::string("fork failed: ") + std::strerror(errno));
  if (pid == 0) run_child(plan);

  // Both sides call setpgid to close the race with an early kill(-pid).
  ::setpgid(pid, pid);
  out_w.reset();
  err_w.reset();
  report_w.reset();
  ruleset.reset();

  ChildFailure failure{};
  auto n = ::read(report_r.get(), &failure, sizeof failure);
  if (n == static_cast<ssize_t>(sizeof failure)) {
    ::waitpid(pid, nullptr, 0);
    throw SetupError(std::string("sandbox setup failed while ") + stage_name(failure.stage) +
                     ": " + std::strerror(failure.err));
  }

  ::fcntl(out_r.get(), F_SETFL, O_NONBLOCK);
  ::fcntl(err_r.get(), F_SETFL, O_NONBLOCK);
  Fd pidfd(static_cast<int>(syscall(SYS_pidfd_open, pid, 0)));

  SandboxOutcome outcome;
  bool overflow = false;
  bool timed_out = false;
  bool out_open = true, err_open = true;
  auto deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              limits.wall_time);

  // Returns false once the stream hit EOF.
  auto pump = [&](int fd, std::string& sink) {
    char buf[8192];
    while (true) {
      auto got = ::read(fd, buf, sizeof buf);
      if (got > 0) {
        auto room = limits.output_bytes - std::min<std::uint64_t>(sink.size(), limits.output_bytes);
        sink.append(buf, std::min<std::uint64_t>(room, static_cast<std::uint64_t>(got)));
        if (static_cast<std::uint64_t>(got) > room) overflow = true;
        continue;
      }
      if (got == 0) return false;
      return errno == EAGAIN || errno == EINTR;
    }
  };

  bool exited = false;
  int wstatus = 0;
  while (!exited && !overflow) {
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      timed_out = true;
      break;
    }
    auto remaining_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count() + 1;
    pollfd fds[3];
    nfds_t count = 0;
    int out_idx = -1, err_idx = -1, pid_idx = -1;
    if (out_open) {
      out_idx = static_cast<int>(count);
      fds[count++] = {out_r.get(), POLLIN, 0};
    }
    if (err_open) {
      err_idx = static_cast<int>(count);
      fds[count++] = {err_r.get(), POLLIN, 0};
    }
    if (pidfd.get() >= 0) {
      pid_idx = static_cast<int>(count);
      fds[count++] = {pidfd.get(), POLLIN, 0};
    }
    int timeout_ms = static_cast<int>(std::min<long long>(remaining_ms, pidfd.get() >= 0 ? 1000 : 20));
    int ready = ::poll(fds, count, timeout_ms);
    if (ready < 0 && errno != EINTR) break;
    if (out_idx >= 0 && fds[out_idx].revents) out_open = pump(out_r.get(), outcome.stdout_bytes);
    if (err_idx >= 0 && fds[err_idx].revents) err_open = pump(err_r.get(), outcome.stderr_bytes);
    if (pid_idx < 0 || fds[pid_idx].revents) {
      if (::waitpid(pid, &wstatus, WNOHANG) == pid) exited = true;
    }
  }

  if (!exited) {
    ::kill(-pid, SIGKILL);
    ::kill(pid, SIGKILL);
    while (::waitpid(pid, &wstatus, 0) < 0 && errno == EINTR) {
    }
  }
  // Reap stragglers left in the process group, then collect buffered output.
  ::kill(-pid, SIGKILL);
  if (out_open) pump(out_r.get(), outcome.stdout_bytes);
  if (err_open) pump(err_r.get(), outcome.stderr_bytes);

  outcome.duration =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (WIFEXITED(wstatus)) {
    outcome.exit_code = WEXITSTATUS(wstatus);
  } else if (WIFSIGNALED(wstatus)) {
    outcome.term_signal = WTERMSIG(wstatus);
    outcome.exit_code = 128 + outcome.term_signal;
  }
  if (overflow) {
    outcome.status = SandboxStatus::Overflow;
  } else if (timed_out) {
    outcome.status = SandboxStatus::Timeout;
  }
  return outcome;
}

// ---------------------------------------------------------------------------
// Scratch directories

ScratchDir::ScratchDir(ScratchDir&& other) noexcept
    : path_(std::move(other.path_)), keep_(other.keep_) {
  other.path_.clear();
}

ScratchDir& ScratchDir::operator=(ScratchDir&& other) noexcept {
  if (this != &other) {
    if (!path_.empty() && !keep_) {
      std::error_code ec;
      fs::remove_all(path_, ec);
    }
    path_ = std::move(other.path_);
    keep_ = other.keep_;
    other.path_.clear();
  }
  return *this;
}

ScratchDir::~ScratchDir() {
  if (!path_.empty() && !keep_) {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
}

std::vector<std::string> ScratchDir::files() const {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(path_)) {
    names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::string ScratchDir::read(std::string_view name) const {
  std::ifstream in(path_ / name, std::ios::binary);
  if (!in) return {};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path default_scratch_root() {
  if (const char* env = std::getenv("GRADER_SCRATCH_DIR"); env && *env) return env;
  return fs::temp_directory_path();
}

namespace {

fs::path make_unique_dir(const ScratchOptions& options, std::string_view prefix) {
  auto root = options.root.empty() ? default_scratch_root() : options.root;
  std::error_code ec;
  if (!fs::exists(root, ec)) {
    fs::create_directories(root, ec);
    if (ec) throw SetupError("cannot create scratch root " + root.string() + ": " + ec.message());
    // Sandboxed children must be able to traverse into their own directory.
    ::chmod(root.c_str(), 0711);
  }
  std::string tmpl = (root / (std::string(prefix) + "-XXXXXX")).string();
  if (::mkdtemp(tmpl.data()) == nullptr) {
    throw SetupError("cannot create scratch directory under " + root.string() + ": " +
                     std::strerror(errno));
  }
  return tmpl;
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw SetupError("cannot write " + path.string());
  out.close();
  ::chmod(path.c_str(), 0644);
}

}  // namespace

ScratchDir make_private_dir(const ScratchOptions& options, std::string_view prefix) {
  return ScratchDir(make_unique_dir(options, prefix), options.keep);
}

ScratchDir make_scratch(const TaskPackage& task, Phase phase, std::span<const ScratchFile> inputs,
                        const ScratchOptions& options) {
  const auto source_name = runner_source_name(phase, task.language());
  if (phase == Phase::Student) {
    auto teacher_name = runner_source_name(Phase::Teacher, task.language());
    for (const auto& f : inputs) {
      if (f.name == "solution.json" || f.name == "test.json" || f.name == teacher_name) {
        throw SetupError("'" + f.name + "' must not be visible to student code");
      }
    }
  }
  for (const auto& f : inputs) {
    if (f.name.empty() || f.name.find('/') != std::string::npos || f.name == "." || f.name == "..") {
      throw SetupError("invalid scratch file name '" + f.name + "'");
    }
  }

  ScratchDir dir(make_unique_dir(options, "ug-" + std::string(to_string(phase))), options.keep);
  write_file(dir.path() / kHarnessFile, harness_source());
  write_file(dir.path() / "spec.json", to_json(task.spec()).dump(2) + "\n");
  if (phase == Phase::Teacher) write_file(dir.path() / source_name, task.teacher_source);
  for (const auto& f : inputs) write_file(dir.path() / f.name, f.content);

  if (::geteuid() == 0) {
    if (::chown(dir.path().c_str(), options.isolation.uid, options.isolation.gid) != 0) {
      throw SetupError("cannot hand " + dir.path().string() + " to the sandbox user");
    }
  }
  return dir;
}

}  // namespace unitgrade
