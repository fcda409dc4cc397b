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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unitgrade/config.hpp"

namespace unitgrade {

/// FNV-1a, 64-bit.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// override, or FNV-1a of task_id + "\x1f" + submission_id.
std::uint64_t derive_seed(std::string_view task_id, std::string_view submission_id,
                          std::optional<std::uint64_t> override_seed = std::nullopt) noexcept;

/// splitmix64. Portable and bit-exact across implementations, which is what
/// keeps generated suites reproducible.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, span) via multiply-high; span == 0 means the full 2^64.
  std::uint64_t below(std::uint64_t span) noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

Value sample(const GeneratorExpr& g, SplitMix64& rng);

struct TestCase {
  std::size_t index = 0;
  std::vector<Value> args;
  std::optional<std::size_t> predefined;  // index into plan.predefined

  bool is_random() const noexcept { return !predefined.has_value(); }
  bool operator==(const TestCase&) const = default;
};

struct TestSuite {
  std::vector<TestCase> cases;
  std::uint64_t seed = 0;

  bool operator==(const TestSuite&) const = default;
};

/// Predefined cases in declaration order, then random.n generated ones.
TestSuite generate_suite(const TestPlan& plan, const FunctionSpec& spec, std::uint64_t seed);

/// data.csv: RFC-4180, no header, "\n" row terminators. str columns carry the
/// raw string (CSV quoting is their only escaping); other types carry
/// render_value output.
std::string write_suite_csv(const TestSuite& suite);

/// Reads write_suite_csv output back into argument rows. Throws TupleError.
std::vector<std::vector<Value>> parse_suite_csv(std::string_view csv, std::span<const SemType> types);

}  // namespace unitgrade
