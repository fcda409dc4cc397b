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

#include "unitgrade/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "unitgrade/api.hpp"
#include "unitgrade/engine.hpp"
#include "unitgrade/errors.hpp"

namespace unitgrade {

namespace {

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_create(const std::string& config_path, const std::string& language,
               const std::optional<std::string>& id, std::ostream& out, std::ostream& err) {
  auto raw = slurp(config_path);
  if (!raw) {
    err << "error: cannot read " << config_path << '\n';
    return 1;
  }
  Engine engine(engine_options_from_env());
  auto config = parse_task_config(*raw);
  auto manifest = engine.create(kUnitTestingType, language, config, id);
  out << to_json(manifest).dump(2) << '\n';
  return 0;
}

int cmd_grade(const std::string& task_id, const std::string& submission_path,
              std::optional<std::uint64_t> seed, std::ostream& out, std::ostream& err) {
  auto raw = slurp(submission_path);
  if (!raw) {
    err << "error: cannot read " << submission_path << '\n';
    return 1;
  }
  Engine engine(engine_options_from_env());
  auto report = engine.grade(task_id, *raw, seed);
  out << serialize(report.output);
  return report.output.status == GradeStatus::Error ? 1 : 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unit-testing exercise generator and grader"};
  app.require_subcommand(1);

  std::string config_path, language = "python";
  std::optional<std::string> requested_id;
  auto* create = app.add_subcommand("create", "Compile a task configuration into the task store");
  create->add_option("--config", config_path, "Task configuration JSON file")->required();
  create->add_option("--language", language, "Target language")->capture_default_str();
  create->add_option("--id", requested_id, "Requested task id");

  std::string task_id, submission_path;
  std::optional<std::uint64_t> seed;
  auto* grade = app.add_subcommand("grade", "Grade a submission file against a stored task");
  grade->add_option("--task", task_id, "Task id")->required();
  grade->add_option("--submission", submission_path, "Submission JSON file")->required();
  grade->add_option("--seed", seed, "Pin the random test seed");

  std::string address = "127.0.0.1:8080";
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--addr", address, "host:port to listen on")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*create) return cmd_create(config_path, language, requested_id, out, err);
    if (*grade) return cmd_grade(task_id, submission_path, seed, out, err);
    if (*serve_cmd) {
      Engine engine(engine_options_from_env());
      if (!serve(engine, address)) {
        err << "error: cannot listen on " << address << '\n';
        return 1;
      }
      return 0;
    }
  } catch (const Error& e) {
    err << e.kind() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace unitgrade
