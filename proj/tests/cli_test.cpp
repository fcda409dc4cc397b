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

#include <doctest.h>
#include <stdlib.h>

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "support.hpp"
#include "unitgrade/api.hpp"
#include "unitgrade/cli.hpp"

using namespace unitgrade;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "unitgrade");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Points the environment-configured engine at a private store.
struct CliEnv {
  testing::TempDir tmp;
  CliEnv() {
    ::setenv("GRADER_TASK_DIR", (tmp.path() / "tasks").c_str(), 1);
    ::setenv("GRADER_SCRATCH_DIR", (tmp.path() / "scratch").c_str(), 1);
  }
  ~CliEnv() {
    ::unsetenv("GRADER_TASK_DIR");
    ::unsetenv("GRADER_SCRATCH_DIR");
  }
  std::string write(const std::string& name, const std::string& content) {
    auto path = tmp.path() / name;
    std::ofstream(path) << content;
    return path.string();
  }
};

}  // namespace

TEST_CASE("cli create") {
  CliEnv env;
  auto ok = cli({"create", "--config", testing::fixture_path("sub_task.json"), "--language", "python",
                 "--id", "sub"});
  CHECK(ok.code == 0);
  CHECK(nlohmann::json::parse(ok.out)["task_id"] == "sub");

  auto bad = cli({"create", "--config", env.write("bad.json", "{\"spec\": 1}"), "--id", "x"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("SchemaError") != std::string::npos);

  auto lang = cli({"create", "--config", testing::fixture_path("sub_task.json"), "--language", "cobol"});
  CHECK(lang.code == 1);
  CHECK(lang.err.find("UnsupportedLanguage") != std::string::npos);

  CHECK(cli({"create"}).code != 0);
  CHECK(cli({}).code != 0);
}

TEST_CASE("cli grade") {
  CliEnv env;
  REQUIRE(cli({"create", "--config", testing::fixture_path("sub_task.json"), "--id", "sub"}).code == 0);

  auto golden = cli({"grade", "--task", "sub", "--submission", testing::fixture_path("sub_input.json"),
                     "--seed", "4"});
  CHECK(golden.code == 0);
  CHECK(golden.out == testing::read_fixture("golden/output.json"));

  auto good = cli({"grade", "--task", "sub", "--submission",
                   env.write("good.json", R"({"tid": "s2", "fields": {"f1": "return a - b"}})")});
  CHECK(good.code == 0);
  CHECK(nlohmann::json::parse(good.out)["status"] == "success");

  auto unknown = cli({"grade", "--task", "nope", "--submission", testing::fixture_path("sub_input.json")});
  CHECK(unknown.code == 1);
  CHECK(unknown.err.find("NotFound") != std::string::npos);

  auto inner_error = cli({"grade", "--task", "sub", "--submission", env.write("junk.json", "junk")});
  CHECK(inner_error.code == 1);
  CHECK(nlohmann::json::parse(inner_error.out)["status"] == "error");
}

TEST_CASE("cli and http produce the same inner document") {
  CliEnv env;
  REQUIRE(cli({"create", "--config", testing::fixture_path("sub_task.json"), "--id", "sub"}).code == 0);
  auto input = testing::read_fixture("sub_input.json");
  auto via_cli = cli({"grade", "--task", "sub", "--submission", testing::fixture_path("sub_input.json")});

  Engine engine(engine_options_from_env());
  ApiService api(engine);
  auto r = api.execute(nlohmann::json{{"tid", "sub"}, {"input", input}}.dump());
  REQUIRE(r.status == 200);
  CHECK(nlohmann::json::parse(r.body)["output"].get<std::string>() == via_cli.out);
}
