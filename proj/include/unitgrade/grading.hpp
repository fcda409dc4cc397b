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

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unitgrade/package.hpp"
#include "unitgrade/runner.hpp"
#include "unitgrade/sandbox.hpp"
#include "unitgrade/testgen.hpp"

namespace unitgrade {

/// Inner input document: {"tid": <submission id>, "fields": {"f1": ...}}.
struct Submission {
  std::string submission_id;
  std::map<std::string, std::string> fields;
};

/// Throws SchemaError.
Submission parse_submission(std::string_view raw);
nlohmann::ordered_json to_json(const Submission& s);

enum class Verdict { Checked, Exception, Timeout, Error };

std::string_view to_string(Verdict v) noexcept;

struct TestOutcome {
  std::size_t index = 0;
  Verdict verdict = Verdict::Error;
  std::string value;

  bool operator==(const TestOutcome&) const = default;
};

/// How the harness run ended; decides the verdict of rows it never reached.
enum class RunEnd { Finished, TimedOut, Overflowed, Crashed };

/// Decode data.res. A lone "load-error:<diag>" line expands to an error
/// outcome "load-error: <diag>" for every test.
std::vector<TestOutcome> parse_data_res(std::string_view text, std::size_t count,
                                        RunEnd end = RunEnd::Finished);

/// Test i passes iff the student verdict is checked and its value equals the
/// solution under typed equality. Floats use a 1e-6 relative tolerance unless
/// `strict_float`. Throws ResultFormatError on an unparsable solution line.
std::vector<bool> compare_results(std::span<const TestOutcome> student,
                                  std::span<const std::string> solution, SemType return_type,
                                  bool strict_float = false);

/// Fraction of passing tests. Throws std::invalid_argument on an empty list.
double compute_score(const std::vector<bool>& passes);

struct FailureExample {
  std::string input;
  std::string expected;
  std::string actual;

  bool operator==(const FailureExample&) const = default;
};

struct FeedbackSelection {
  std::optional<FailureExample> example;
  std::optional<std::string> message;
};

/// Example and hint for the first failing test in suite order.
FeedbackSelection select_feedback(const TestSuite& suite, const std::vector<bool>& passes,
                                  std::span<const TestOutcome> outcomes,
                                  std::span<const std::string> solution, const TestPlan& plan,
                                  SemType return_type);

struct Feedback {
  double score = 0;
  std::size_t succeeded = 0;
  std::size_t total = 0;
  std::optional<FailureExample> example;
  std::optional<std::string> message;
};

enum class GradeStatus { Success, Failed, Error };

/// What the execution backend reports in the outer envelope. Learner test
/// failures still count as a successful backend run.
enum class BackendStatus { Success, Timeout, Overflow, Error };

std::string_view to_string(GradeStatus s) noexcept;
std::string_view to_string(BackendStatus s) noexcept;

struct GradeOutput {
  std::string submission_id;
  GradeStatus status = GradeStatus::Error;
  std::optional<Feedback> feedback;
  std::optional<std::string> error_detail;
  BackendStatus backend = BackendStatus::Success;
};

GradeOutput error_output(std::string submission_id, std::string detail,
                         BackendStatus backend = BackendStatus::Success);

nlohmann::ordered_json to_json(const GradeOutput& out);
/// The inner output document as emitted by both the CLI and the HTTP API.
std::string serialize(const GradeOutput& out);

struct GradingOptions {
  Limits limits;
  RunnerOptions runner;
  ScratchOptions scratch;
  std::optional<std::uint64_t> seed;  // beats the task's configured seed
};

/// Everything one pipeline run produced, for callers that need more than the
/// learner-facing document.
struct GradeReport {
  GradeOutput output;
  TestSuite suite;
  std::vector<TestOutcome> outcomes;
  std::vector<std::string> solution;
  std::vector<bool> passes;
  std::string data_csv;
  std::string data_res;
  std::string solution_res;
};

/// pre-process, generate, execute, then solution + feedback. Task and
/// infrastructure failures come back as status error, never as exceptions.
GradeReport run_pipeline(const TaskPackage& task, const Submission& submission,
                         const GradingOptions& options);

/// Parse the raw inner input and grade it; malformed input yields an error
/// document.
GradeReport grade_input(const TaskPackage& task, std::string_view raw_input,
                        const GradingOptions& options);

}  // namespace unitgrade
