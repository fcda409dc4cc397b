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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <httplib.h>
#include <stdlib.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "support.hpp"
#include "unitgrade/api.hpp"
#include "unitgrade/cli.hpp"
#include "unitgrade/errors.hpp"

using namespace unitgrade;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kScoreTolerance = 1e-6;
constexpr double kReferenceScore = 0.14285715;
constexpr double kReproductionBudgetSeconds = 10.0;
constexpr double kGraceSeconds = 5.0;
constexpr double kLoopWallSeconds = 3.0;
constexpr std::uint64_t kPinnedSeed = 4;
constexpr int kOracleSeeds = 20;
constexpr int kScoreVectors = 1000;

const std::string kSolutionText = "return a - b";

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) detail << what;
    if (!cond) ok = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string input_json(const std::string& tid, const std::string& body) {
  return json{{"tid", tid}, {"fields", {{"f1", body}}}}.dump();
}

struct World {
  testing::TempDir tmp;
  EngineOptions options;
  std::unique_ptr<Engine> engine;

  explicit World(double wall = 20.0) {
    options = testing::engine_options(tmp);
    options.grading.limits.wall_time = std::chrono::duration<double>(wall);
    engine = std::make_unique<Engine>(options);
  }
  void create_sub() {
    engine->create(kUnitTestingType, "python", testing::sub_config(), std::string("sub"));
  }
};

// Evaluates student and reference fragments directly on every data.csv row,
// outside the engine, and returns one 0/1 character per row.
std::string oracle_passes(const std::string& data_csv, const std::string& body) {
  std::string script =
      "import csv, io\n"
      "def student(a, b):\n    " + body + "\n"
      "def teacher(a, b):\n    " + kSolutionText + "\n"
      "rows = list(csv.reader(io.StringIO(" + json(data_csv).dump() + ")))\n"
      "out = []\n"
      "for r in rows:\n"
      "    a, b = int(r[0]), int(r[1])\n"
      "    out.append('1' if student(a, b) == teacher(a, b) else '0')\n"
      "print(''.join(out))\n";
  auto out = testing::run_python(script);
  while (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

std::string pass_string(const std::vector<bool>& passes) {
  std::string s;
  for (bool p : passes) s += p ? '1' : '0';
  return s;
}

std::vector<pid_t> processes_under(const fs::path& root) {
  std::vector<pid_t> found;
  auto prefix = fs::weakly_canonical(root).string();
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator("/proc", ec)) {
    auto name = entry.path().filename().string();
    if (name.find_first_not_of("0123456789") != std::string::npos) continue;
    auto cwd = fs::read_symlink(entry.path() / "cwd", ec);
    if (!ec && cwd.string().starts_with(prefix)) found.push_back(std::stoi(name));
  }
  return found;
}

int cli(std::vector<std::string> args, std::string& out) {
  args.insert(args.begin(), "unitgrade");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
  out = o.str();
  return code;
}

// ---------------------------------------------------------------------------

Check reference_reproduction() {
  Check c;
  World w;
  auto start = std::chrono::steady_clock::now();
  w.create_sub();
  auto report = w.engine->grade("sub", testing::read_fixture("sub_input.json"), kPinnedSeed);
  double elapsed = seconds_since(start);
  const auto& out = report.output;
  c.expect(out.status == GradeStatus::Failed, "status is not failed");
  if (!out.feedback) {
    c.expect(false, "no feedback");
    return c;
  }
  const auto& fb = *out.feedback;
  c.expect(fb.total == 14, "total != 14");
  c.expect(fb.example && *fb.example == FailureExample{"(10,5)", "5", "10"}, "example mismatch");
  c.expect(fb.message == "Have you subtracted the 2nd parameter?", "message mismatch");

  auto oracle = oracle_passes(report.data_csv, "return a");
  std::size_t zero_b = 0;
  for (std::size_t i = 4; i < oracle.size(); ++i) zero_b += oracle[i] == '1';
  c.expect(oracle.substr(0, 4) == "0001", "predefined pass set is not {(12,0)}");
  c.expect(fb.succeeded == 1 + zero_b, "succeeded != 1 + random cases with b = 0");
  c.expect(elapsed < kReproductionBudgetSeconds, "took too long");
  c.detail << "seed " << kPinnedSeed << ", " << fb.succeeded << "/" << fb.total << ", " << elapsed
           << " s";
  return c;
}

Check score_identity() {
  Check c;
  std::mt19937_64 rng(2024);
  double worst = 0;
  for (int i = 0; i < kScoreVectors; ++i) {
    std::vector<bool> passes(1 + rng() % 200);
    std::size_t ok = 0;
    for (std::size_t k = 0; k < passes.size(); ++k) ok += (passes[k] = rng() % 2);
    double err = std::abs(compute_score(passes) - static_cast<double>(ok) / passes.size());
    worst = std::max(worst, err);
  }
  c.expect(worst <= kScoreTolerance, "score deviates from the ratio");
  std::vector<bool> two_of_14(14, false);
  two_of_14[0] = two_of_14[1] = true;
  double s = compute_score(two_of_14);
  c.expect(std::abs(s - kReferenceScore) <= kScoreTolerance, "2/14 not within tolerance");
  c.detail << kScoreVectors << " vectors, worst error " << worst << "; 2/14 = " << s;
  return c;
}

Check self_consistency() {
  Check c;
  World w;
  int count = 0;
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(testing::fixture_path("corpus"))) {
    if (e.path().extension() == ".json") files.push_back(e.path().string());
  }
  std::sort(files.begin(), files.end());
  std::set<SemType> returns;
  bool zero_arg = false;
  for (const auto& file : files) {
    auto name = fs::path(file).stem().string();
    std::ifstream in(file);
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    auto config = parse_task_config(raw);
    returns.insert(config.spec.return_type);
    zero_arg = zero_arg || config.spec.args.empty();
    w.engine->create(kUnitTestingType, "python", config, name);
    auto input = json{{"tid", "self"}, {"fields", config.solution.fields}}.dump();
    auto report = w.engine->grade(name, input);
    bool ok = report.output.status == GradeStatus::Success && report.output.feedback &&
              report.output.feedback->score == 1.0;
    c.expect(ok, name + " does not pass its own solution; ");
    ++count;
  }
  c.expect(count >= 5, "corpus has fewer than 5 tasks");
  c.expect(zero_arg, "no zero-argument task");
  c.expect(returns.contains(SemType::Float) && returns.contains(SemType::Str),
           "corpus lacks float or str returns");
  c.detail << count << " tasks";
  return c;
}

Check oracle_equivalence() {
  Check c;
  World w;
  w.create_sub();
  int agreed = 0;
  std::mt19937_64 rng(99);
  for (int i = 0; i < kOracleSeeds; ++i) {
    auto seed = rng();
    auto report = w.engine->grade("sub", input_json("s", "return a"), seed);
    auto engine_passes = pass_string(report.passes);
    auto oracle = oracle_passes(report.data_csv, "return a");
    std::string structural;
    for (const auto& tc : report.suite.cases) structural += tc.args[1].as_int() == 0 ? '1' : '0';
    bool ok = engine_passes == oracle && oracle == structural;
    c.expect(ok, "seed " + std::to_string(seed) + ": engine " + engine_passes + " oracle " + oracle);
    agreed += ok;
  }
  c.detail << agreed << "/" << kOracleSeeds << " seeds agree";
  return c;
}

Check wildcard_feedback() {
  Check c;
  World w;
  w.create_sub();
  auto plus = w.engine->grade("sub", input_json("s1", "return a + b"), kPinnedSeed).output;
  c.expect(plus.feedback && plus.feedback->example &&
               *plus.feedback->example == FailureExample{"(10,5)", "5", "15"},
           "a + b example mismatch; ");
  c.expect(plus.feedback && !plus.feedback->message, "a + b carries a message; ");

  auto neg = w.engine->grade("sub", input_json("s2", "return a - b if a >= 0 else 1"), kPinnedSeed).output;
  c.expect(neg.feedback && neg.feedback->example &&
               *neg.feedback->example == FailureExample{"(-1,2)", "-3", "1"},
           "negative example mismatch; ");
  c.expect(neg.feedback && neg.feedback->message == "Have you considered negative parameters?",
           "wildcard message missing; ");
  c.detail << "a + b -> actual 15, no message; negative case -> wildcard message";
  return c;
}

Check safety_suite() {
  Check c;
  // (a) endless loop
  {
    World w(kLoopWallSeconds);
    w.create_sub();
    auto start = std::chrono::steady_clock::now();
    auto report = w.engine->grade("sub", input_json("s", "while True: pass"));
    double elapsed = seconds_since(start);
    c.expect(elapsed <= kLoopWallSeconds + kGraceSeconds, "loop response too slow; ");
    c.expect(report.output.status != GradeStatus::Success, "loop graded as success; ");
    auto left = processes_under(w.options.grading.scratch.root);
    c.expect(left.empty(), "processes left behind; ");
    c.detail << "(a) " << elapsed << " s, " << left.size() << " leftover; ";
  }
  // (b) flooding output
  {
    World w;
    w.create_sub();
    auto printed = w.engine->grade("sub", input_json("s", "print('x' * 10**7)\nreturn a - b"));
    c.expect(printed.output.status == GradeStatus::Success, "printing body not graded cleanly; ");
    auto raw = w.engine->grade(
        "sub", input_json("s", "import os\nos.write(1, b'x' * 10**7)\nreturn a - b"));
    auto lines = std::count(raw.data_res.begin(), raw.data_res.end(), '\n');
    bool well_formed = raw.data_res.find('x') == std::string::npos ||
                       raw.data_res.find("xxxx") == std::string::npos;
    c.expect(well_formed, "data.res corrupted; ");
    c.expect(raw.output.status != GradeStatus::Success || lines == 14, "inconsistent flood result; ");
    ApiService api(*w.engine);
    auto r = api.execute(json{{"tid", "sub"}, {"input", input_json("s", "print('y' * 10**7)\nreturn a")}}.dump());
    auto output = json::parse(r.body)["output"].get<std::string>();
    c.expect(output.size() <= ApiService::kDefaultOutputCap, "output exceeds cap; ");
    c.detail << "(b) print swallowed, raw write -> " << to_string(raw.output.status) << "/"
             << to_string(raw.output.backend) << "; ";
  }
  // (c) reading the reference solution
  {
    World w;
    w.create_sub();
    auto target = (w.options.task_dir / "sub" / "solution.json").string();
    std::vector<std::string> bodies = {
        "return len(open(" + json(target).dump() + ").read())",
        "raise Exception(open(" + json(target).dump() + ").read())",
        "import glob\nraise Exception(str([open(p).read() for p in glob.glob('/**/solution.json', recursive=True)]))",
        "raise Exception(open('teacher.py').read())",
    };
    int blocked = 0;
    for (const auto& body : bodies) {
      auto report = w.engine->grade("sub", input_json("s", body));
      auto doc = serialize(report.output);
      c.expect(doc.find(kSolutionText) == std::string::npos, "solution text leaked; ");
      c.expect(report.data_res.find(kSolutionText) == std::string::npos, "solution text in data.res; ");
      bool all_denied = !report.outcomes.empty() &&
                        std::all_of(report.outcomes.begin(), report.outcomes.end(), [](const auto& o) {
                          return o.verdict == Verdict::Exception || o.verdict == Verdict::Error;
                        });
      c.expect(all_denied, "a read attempt was not refused; ");
      blocked += all_denied;
    }
    c.detail << "(c) " << blocked << "/" << bodies.size() << " read attempts refused";
  }
  return c;
}

Check determinism() {
  Check c;
  testing::TempDir tmp;
  ::setenv("GRADER_TASK_DIR", (tmp.path() / "tasks").c_str(), 1);
  ::setenv("GRADER_SCRATCH_DIR", (tmp.path() / "scratch").c_str(), 1);
  std::string out, first, second;
  c.expect(cli({"create", "--config", testing::fixture_path("sub_task.json"), "--id", "sub"}, out) == 0,
           "create failed; ");
  auto sub = testing::fixture_path("sub_input.json");
  cli({"grade", "--task", "sub", "--submission", sub, "--seed", "123"}, first);
  cli({"grade", "--task", "sub", "--submission", sub, "--seed", "123"}, second);
  c.expect(!first.empty() && first == second, "outputs differ");
  ::unsetenv("GRADER_TASK_DIR");
  ::unsetenv("GRADER_SCRATCH_DIR");
  c.detail << first.size() << " identical bytes";
  return c;
}

Check wire_goldens() {
  Check c;
  World w;
  w.create_sub();
  auto input = testing::read_fixture("sub_input.json");
  auto report = w.engine->grade("sub", input, kPinnedSeed);
  int matched = 0;
  auto same = [&](const std::string& got, const std::string& fixture) {
    bool ok = got == testing::read_fixture("golden/" + fixture);
    c.expect(ok, fixture + " differs; ");
    matched += ok;
  };
  same(report.data_csv, "data.csv");
  same(report.data_res, "data.res");
  same(report.solution_res, "solution.res");
  same(serialize(report.output), "output.json");
  same(to_json(parse_submission(input)).dump(2) + "\n", "input.json");
  c.detail << matched << "/5 files byte-identical";
  return c;
}

Check http_round_trip() {
  Check c;
  World w;
  ApiService api(*w.engine);
  httplib::Server server;
  mount_routes(server, api);
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  client.set_read_timeout(120, 0);
  json create{{"type", "unit-testing"},
              {"language", "python"},
              {"id", "sub"},
              {"config", json::parse(testing::read_fixture("sub_task.json"))}};
  auto created = client.Post("/api/tasks", create.dump(), "application/json");
  c.expect(created && created->status == 201, "create did not return 201; ");
  json exec{{"tid", "sub"}, {"input", testing::read_fixture("sub_input.json")}};
  auto run = client.Post("/api/execute", exec.dump(), "application/json");
  c.expect(run && run->status == 200, "execute did not return 200; ");
  if (run && run->status == 200) {
    auto env = json::parse(run->body);
    c.expect(env["tid"] == "sub", "outer tid is not the task id; ");
    c.expect(env["status"] == "success", "outer status is not success; ");
    auto inner = json::parse(env["output"].get<std::string>());
    c.expect(inner["tid"] == "s001" && inner["status"] == "failed" &&
                 inner["feedback"]["stats"]["total"] == 14,
             "inner document mismatch; ");
  }
  json unknown{{"tid", "nope"}, {"input", testing::read_fixture("sub_input.json")}};
  auto missing = client.Post("/api/execute", unknown.dump(), "application/json");
  c.expect(missing && missing->status == 404, "unknown task did not return 404; ");
  server.stop();
  worker.join();
  c.detail << "port " << port;
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
      {"reference failure reproduction", reference_reproduction},
      {"score identity", score_identity},
      {"solution self-consistency", self_consistency},
      {"oracle equivalence", oracle_equivalence},
      {"wildcard feedback", wildcard_feedback},
      {"safety suite", safety_suite},
      {"determinism", determinism},
      {"wire-format goldens", wire_goldens},
      {"http round trip", http_round_trip},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check result;
    try {
      result = run();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail << "exception: " << e.what();
    }
    failed += !result.ok;
    std::cout << (result.ok ? "PASS " : "FAIL ") << name << ": " << result.detail.str() << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
