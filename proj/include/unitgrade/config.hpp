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
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "unitgrade/value.hpp"

namespace unitgrade {

struct ArgSpec {
  std::string name;
  SemType type = SemType::Int;

  bool operator==(const ArgSpec&) const = default;
};

/// Signature of the function the learner writes.
struct FunctionSpec {
  std::string name;
  std::vector<ArgSpec> args;
  SemType return_type = SemType::Int;

  std::vector<SemType> arg_types() const;
  /// Human-readable form, e.g. "sub(a: int, b: int) -> int".
  std::string signature() const;

  bool operator==(const FunctionSpec&) const = default;
};

struct PredefinedTest {
  std::string data;  // tuple text exactly as configured
  std::vector<Value> args;
  // Answer key text -> hint. "**" matches any wrong answer.
  std::map<std::string, std::string> feedback;

  bool operator==(const PredefinedTest&) const = default;
};

inline constexpr std::string_view kWildcardKey = "**";

struct IntRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  bool operator==(const IntRange&) const = default;
};

/// Uniform over [lo, hi); lo == hi yields lo.
struct FloatRange {
  double lo = 0;
  double hi = 0;
  bool operator==(const FloatRange&) const = default;
};

struct BoolCoin {
  bool operator==(const BoolCoin&) const = default;
};

/// Lowercase ASCII strings with length uniform in [min_len, max_len].
struct StrLength {
  std::uint64_t min_len = 0;
  std::uint64_t max_len = 0;
  bool operator==(const StrLength&) const = default;
};

using GeneratorExpr = std::variant<IntRange, FloatRange, BoolCoin, StrLength>;

SemType generator_kind(const GeneratorExpr& g) noexcept;
std::string render_generator(const GeneratorExpr& g);

/// Parse one generator expression ("int(-20,20)", "float(0,1)", "bool()",
/// "str(1,8)") and check it produces `expected`. Total: any input yields a
/// value or DslError.
GeneratorExpr parse_generator_expr(std::string_view text, SemType expected);

struct RandomSpec {
  std::uint64_t n = 0;
  std::vector<GeneratorExpr> args;
  std::optional<std::uint64_t> seed;

  bool operator==(const RandomSpec&) const = default;
};

struct TestPlan {
  std::vector<PredefinedTest> predefined;
  std::optional<RandomSpec> random;
  // Compare float answers exactly instead of with relative tolerance.
  bool strict_float = false;

  std::size_t total() const;
  bool operator==(const TestPlan&) const = default;
};

struct Solution {
  std::map<std::string, std::string> fields;
  bool operator==(const Solution&) const = default;
};

struct TaskConfig {
  FunctionSpec spec;
  TestPlan test;
  Solution solution;

  bool operator==(const TaskConfig&) const = default;
};

inline constexpr std::string_view kBodyField = "f1";
inline constexpr std::uint64_t kMaxRandomTests = 100000;
inline constexpr std::uint64_t kMaxStrLength = 4096;

bool is_identifier(std::string_view name);

/// Parse and validate a configuration document. Throws SchemaError naming the
/// offending path (nlohmann parse failures are reported at path "").
TaskConfig parse_task_config(std::string_view raw);
TaskConfig task_config_from_json(const nlohmann::json& doc);

FunctionSpec parse_function_spec(const nlohmann::json& doc, const std::string& path = "spec");
TestPlan parse_test_plan(const nlohmann::json& doc, const FunctionSpec& spec,
                         const std::string& path = "test");
Solution parse_solution(const nlohmann::json& doc, const std::string& path = "solution");

/// Serialize back to the configuration document shape (key order as authored
/// in the canonical examples). parse_task_config(to_json(c)) == c.
nlohmann::ordered_json to_json(const FunctionSpec& spec);
nlohmann::ordered_json to_json(const TestPlan& plan);
nlohmann::ordered_json to_json(const Solution& solution);
nlohmann::ordered_json to_json(const TaskConfig& config);

}  // namespace unitgrade
