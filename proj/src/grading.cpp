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

#include "unitgrade/grading.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "unitgrade/codegen.hpp"
#include "unitgrade/errors.hpp"

namespace unitgrade {

using nlohmann::json;

Submission parse_submission(std::string_view raw) {
  json doc;
  try {
    doc = json::parse(raw);
  } catch (const json::parse_error& e) {
    throw SchemaError("input", std::string("submission is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("input", "submission must be a JSON object");
  Submission s;
  auto tid = doc.find("tid");
  if (tid == doc.end() || !tid->is_string() || tid->get<std::string>().empty()) {
    throw SchemaError("input.tid", "expected a non-empty submission id");
  }
  s.submission_id = tid->get<std::string>();
  auto fields = doc.find("fields");
  if (fields == doc.end() || !fields->is_object()) {
    throw SchemaError("input.fields", "expected an object of code fragments");
  }
  for (auto it = fields->begin(); it != fields->end(); ++it) {
    if (!it.value().is_string()) throw SchemaError("input.fields." + it.key(), "expected a string");
    s.fields.emplace(it.key(), it.value().get<std::string>());
  }
  return s;
}

nlohmann::ordered_json to_json(const Submission& s) {
  nlohmann::ordered_json fields = nlohmann::ordered_json::object();
  for (const auto& [k, v] : s.fields) fields[k] = v;
  return {{"tid", s.submission_id}, {"fields", std::move(fields)}};
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Checked:
      return "checked";
    case Verdict::Exception:
      return "exception";
    case Verdict::Timeout:
      return "timeout";
    case Verdict::Error:
      return "error";
  }
  return "error";
}

std::string_view to_string(GradeStatus s) noexcept {
  switch (s) {
    case GradeStatus::Success:
      return "success";
    case GradeStatus::Failed:
      return "failed";
    case GradeStatus::Error:
      return "error";
  }
  return "error";
}

std::string_view to_string(BackendStatus s) noexcept {
  switch (s) {
    case BackendStatus::Success:
      return "success";
    case BackendStatus::Timeout:
      return "timeout";
    case BackendStatus::Overflow:
      return "overflow";
    case BackendStatus::Error:
      return "error";
  }
  return "error";
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

constexpr std::string_view kLoadError = "load-error:";

}  // namespace

std::vector<TestOutcome> parse_data_res(std::string_view text, std::size_t count, RunEnd end) {
  auto lines = split_lines(text);
  std::vector<TestOutcome> out;
  out.reserve(count);

  if (!lines.empty() && lines.front().starts_with(kLoadError)) {
    auto diag = lines.front().substr(kLoadError.size());
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back({i, Verdict::Error, "load-error: " + std::string(diag)});
    }
    return out;
  }

  for (std::size_t i = 0; i < count && i < lines.size(); ++i) {
    auto line = lines[i];
    auto colon = line.find(':');
    auto head = line.substr(0, colon);
    std::string value = colon == std::string_view::npos ? "" : std::string(line.substr(colon + 1));
    if (head == "checked" && colon != std::string_view::npos) {
      out.push_back({i, Verdict::Checked, std::move(value)});
    } else if (head == "exception") {
      out.push_back({i, Verdict::Exception, std::move(value)});
    } else if (head == "timeout") {
      out.push_back({i, Verdict::Timeout, ""});
    } else if (head == "error") {
      out.push_back({i, Verdict::Error, std::move(value)});
    } else {
      out.push_back({i, Verdict::Error, "malformed result line"});
    }
  }

  for (std::size_t i = out.size(); i < count; ++i) {
    switch (end) {
      case RunEnd::TimedOut:
        out.push_back({i, Verdict::Timeout, ""});
        break;
      case RunEnd::Overflowed:
        out.push_back({i, Verdict::Error, "output limit exceeded"});
        break;
      case RunEnd::Finished:
      case RunEnd::Crashed:
        out.push_back({i, Verdict::Error, "test run aborted"});
        break;
    }
  }
  return out;
}

namespace {

bool typed_equal(const Value& a, const Value& b, bool strict_float) {
  if (a.type() != SemType::Float || strict_float) return a == b;
  double x = a.as_float(), y = b.as_float();
  if (x == y) return true;
  if (std::isnan(x) || std::isnan(y)) return std::isnan(x) && std::isnan(y);
  if (std::isinf(x) || std::isinf(y)) return false;
  return std::fabs(x - y) <= 1e-6 * std::max({1.0, std::fabs(x), std::fabs(y)});
}

std::optional<Value> try_parse(std::string_view text, SemType type) {
  try {
    return parse_value(text, type);
  } catch (const TupleError&) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<bool> compare_results(std::span<const TestOutcome> student,
                                  std::span<const std::string> solution, SemType return_type,
                                  bool strict_float) {
  if (student.size() != solution.size()) {
    throw ResultFormatError("result count mismatch: " + std::to_string(student.size()) +
                            " student outcomes, " + std::to_string(solution.size()) + " answers");
  }
  std::vector<bool> passes;
  passes.reserve(student.size());
  for (std::size_t i = 0; i < student.size(); ++i) {
    auto expected = try_parse(solution[i], return_type);
    if (!expected) {
      throw ResultFormatError("solution line " + std::to_string(i) + " is not a valid " +
                              std::string(to_string(return_type)));
    }
    bool pass = false;
    if (student[i].verdict == Verdict::Checked) {
      auto actual = try_parse(student[i].value, return_type);
      pass = actual && typed_equal(*actual, *expected, strict_float);
    }
    passes.push_back(pass);
  }
  return passes;
}

double compute_score(const std::vector<bool>& passes) {
  if (passes.empty()) throw std::invalid_argument("cannot score an empty test suite");
  auto ok = std::count(passes.begin(), passes.end(), true);
  return static_cast<double>(ok) / static_cast<double>(passes.size());
}

FeedbackSelection select_feedback(const TestSuite& suite, const std::vector<bool>& passes,
                                  std::span<const TestOutcome> outcomes,
                                  std::span<const std::string> solution, const TestPlan& plan,
                                  SemType return_type) {
  auto first = std::find(passes.begin(), passes.end(), false);
  if (first == passes.end()) return {};
  auto i = static_cast<std::size_t>(first - passes.begin());
  const auto& outcome = outcomes[i];

  FailureExample example;
  example.input = render_args_tuple(suite.cases[i].args);
  example.expected = solution[i];
  std::optional<std::string> canonical_actual;
  switch (outcome.verdict) {
    case Verdict::Checked:
      if (auto v = try_parse(outcome.value, return_type)) canonical_actual = render_value(*v);
      example.actual = canonical_actual.value_or(outcome.value);
      break;
    case Verdict::Exception:
      example.actual = "exception: " + outcome.value;
      break;
    case Verdict::Timeout:
      example.actual = "timeout";
      break;
    case Verdict::Error:
      example.actual =
          outcome.value.starts_with("load-error") ? outcome.value : "error: " + outcome.value;
      break;
  }

  FeedbackSelection out;
  out.example = std::move(example);
  const auto& origin = suite.cases[i].predefined;
  if (!origin) return out;
  const auto& feedback = plan.predefined.at(*origin).feedback;
  if (canonical_actual) {
    for (const auto& [key, message] : feedback) {
      if (key == kWildcardKey) continue;
      auto k = try_parse(key, return_type);
      if (k && render_value(*k) == *canonical_actual) {
        out.message = message;
        return out;
      }
    }
  }
  if (auto it = feedback.find(std::string(kWildcardKey)); it != feedback.end()) {
    out.message = it->second;
  }
  return out;
}

GradeOutput error_output(std::string submission_id, std::string detail, BackendStatus backend) {
  GradeOutput out;
  out.submission_id = std::move(submission_id);
  out.status = GradeStatus::Error;
  out.error_detail = std::move(detail);
  out.backend = backend;
  return out;
}

nlohmann::ordered_json to_json(const GradeOutput& out) {
  nlohmann::ordered_json doc{{"tid", out.submission_id}, {"status", to_string(out.status)}};
  if (out.error_detail) doc["error_detail"] = *out.error_detail;
  if (out.feedback) {
    const auto& fb = *out.feedback;
    nlohmann::ordered_json f = nlohmann::ordered_json::object();
    if (fb.example) {
      f["example"] = {{"input", fb.example->input},
                      {"expected", fb.example->expected},
                      {"actual", fb.example->actual}};
    }
    if (fb.message) f["message"] = *fb.message;
    f["stats"] = {{"succeeded", fb.succeeded}, {"total", fb.total}};
    f["score"] = fb.score;
    doc["feedback"] = std::move(f);
  }
  return doc;
}

std::string serialize(const GradeOutput& out) {
  return to_json(out).dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

namespace {

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw SetupError("cannot write " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

RunEnd run_end(const SandboxOutcome& o) {
  switch (o.status) {
    case SandboxStatus::Timeout:
      return RunEnd::TimedOut;
    case SandboxStatus::Overflow:
      return RunEnd::Overflowed;
    case SandboxStatus::Completed:
      return o.exit_code == 0 ? RunEnd::Finished : RunEnd::Crashed;
  }
  return RunEnd::Crashed;
}

std::string first_line(std::string_view text) {
  auto nl = text.find('\n');
  return std::string(text.substr(0, nl));
}

// Teacher answers, or TaskError when the reference run is unusable.
std::vector<std::string> teacher_answers(const SandboxOutcome& run, std::string_view res,
                                         std::size_t count, BackendStatus& backend) {
  if (run.status == SandboxStatus::Timeout) {
    backend = BackendStatus::Timeout;
    throw TaskError("reference solution exceeded the time limit");
  }
  if (run.status == SandboxStatus::Overflow) {
    backend = BackendStatus::Overflow;
    throw TaskError("reference solution exceeded the output limit");
  }
  if (run.exit_code != 0) {
    throw TaskError("reference run failed with exit code " + std::to_string(run.exit_code) +
                    (run.stderr_bytes.empty() ? "" : ": " + first_line(run.stderr_bytes)));
  }
  auto lines = split_lines(res);
  if (!lines.empty() && lines.front().starts_with(kLoadError)) {
    throw TaskError("reference solution does not load: " +
                    std::string(lines.front().substr(kLoadError.size())));
  }
  if (lines.size() != count) {
    throw TaskError("reference run produced " + std::to_string(lines.size()) + " answers for " +
                    std::to_string(count) + " tests");
  }
  std::vector<std::string> answers;
  answers.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (lines[i].starts_with('!')) {
      throw TaskError("reference solution failed on test " + std::to_string(i) + ": " +
                      std::string(lines[i].substr(1)));
    }
    answers.emplace_back(lines[i]);
  }
  return answers;
}

}  // namespace

GradeReport run_pipeline(const TaskPackage& task, const Submission& submission,
                         const GradingOptions& options) {
  GradeReport report;
  const auto& plan = task.plan();
  const auto& spec = task.spec();
  BackendStatus backend = BackendStatus::Success;

  try {
    // 1. pre-process
    auto job = make_private_dir(options.scratch, "ug-job");
    write_text(job.path() / "tid.txt", submission.submission_id);
    std::string student_source;
    try {
      student_source = fill_template(task.student_template, submission.fields);
    } catch (const MissingField& e) {
      report.output = error_output(submission.submission_id,
                                   "submission lacks field '" + e.field() + "'");
      return report;
    }

    // 2. generate
    auto configured = plan.random ? plan.random->seed : std::nullopt;
    auto seed = derive_seed(task.task_id(), submission.submission_id,
                            options.seed ? options.seed : configured);
    report.suite = generate_suite(plan, spec, seed);
    report.data_csv = write_suite_csv(report.suite);
    write_text(job.path() / kDataCsv, report.data_csv);
    const auto count = report.suite.cases.size();

    // 3. execute the learner's code
    {
      const auto source_name = runner_source_name(Phase::Student, task.language());
      std::vector<ScratchFile> inputs{{source_name, student_source},
                                      {std::string(kDataCsv), report.data_csv}};
      auto scratch = make_scratch(task, Phase::Student, inputs, options.scratch);
      auto visible = scratch.files();
      auto cmd = harness_command(options.runner, Phase::Student, task.language());
      auto run = execute(cmd, scratch.path(), options.limits, visible, options.scratch.isolation);
      report.data_res = scratch.read(kDataRes);
      write_text(job.path() / kDataRes, report.data_res);
      report.outcomes = parse_data_res(report.data_res, count, run_end(run));
    }

    // 4. reference answers, then feedback
    {
      std::vector<ScratchFile> inputs{{std::string(kDataCsv), report.data_csv}};
      auto scratch = make_scratch(task, Phase::Teacher, inputs, options.scratch);
      auto visible = scratch.files();
      auto cmd = harness_command(options.runner, Phase::Teacher, task.language());
      auto run = execute(cmd, scratch.path(), options.limits, visible, options.scratch.isolation);
      report.solution_res = scratch.read(kSolutionRes);
      write_text(job.path() / kSolutionRes, report.solution_res);
      report.solution = teacher_answers(run, report.solution_res, count, backend);
    }

    auto submission_id = read_text(job.path() / "tid.txt");
    report.passes = compare_results(report.outcomes, report.solution, spec.return_type,
                                    plan.strict_float);
    auto selection = select_feedback(report.suite, report.passes, report.outcomes,
                                     report.solution, plan, spec.return_type);

    Feedback fb;
    fb.total = count;
    fb.succeeded = static_cast<std::size_t>(
        std::count(report.passes.begin(), report.passes.end(), true));
    fb.score = compute_score(report.passes);
    fb.example = std::move(selection.example);
    fb.message = std::move(selection.message);

    report.output.submission_id = submission_id;
    report.output.status = fb.succeeded == fb.total ? GradeStatus::Success : GradeStatus::Failed;
    report.output.feedback = std::move(fb);
  } catch (const TaskError& e) {
    report.output = error_output(submission.submission_id, std::string("task error: ") + e.what(),
                                 backend);
  } catch (const ResultFormatError& e) {
    report.output =
        error_output(submission.submission_id, std::string("task error: ") + e.what(), backend);
  } catch (const SetupError& e) {
    report.output = error_output(submission.submission_id,
                                 std::string("sandbox error: ") + e.what(), BackendStatus::Error);
  }
  return report;
}

GradeReport grade_input(const TaskPackage& task, std::string_view raw_input,
                        const GradingOptions& options) {
  Submission submission;
  try {
    submission = parse_submission(raw_input);
  } catch (const SchemaError& e) {
    GradeReport report;
    std::string id;
    // Echo the submission id when the document got that far.
    auto doc = json::parse(raw_input, nullptr, false);
    if (doc.is_object() && doc.contains("tid") && doc["tid"].is_string()) {
      id = doc["tid"].get<std::string>();
    }
    report.output = error_output(id, std::string("malformed submission: ") + e.what());
    return report;
  }
  return run_pipeline(task, submission, options);
}

}  // namespace unitgrade
